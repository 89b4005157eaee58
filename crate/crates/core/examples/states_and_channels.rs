//! Density operators, distances and Choi-state channels.

use uncloneable_lab::linalg::random::random_density;
use uncloneable_lab::linalg::state::{fidelity, purified_distance, trace_distance, DensityOperator};
use uncloneable_lab::linalg::ChoiChannel;
use uncloneable_lab::rng;

fn main() -> uncloneable_lab::Result<()> {
    let mut r = rng::from_seed(1);
    let rho = random_density(vec![2, 2], 4, &mut r);
    let sigma = DensityOperator::maximally_mixed(vec![2, 2]);
    println!("trace distance to omega: {:.6}", trace_distance(&rho, &sigma)?);
    println!("fidelity to omega:       {:.6}", fidelity(&rho, &sigma)?);
    println!("purified distance:       {:.6}", purified_distance(&rho, &sigma)?);

    let tr_b = ChoiChannel::partial_trace(vec![2, 2], &[0])?;
    let via_choi = tr_b.apply(&rho)?;
    let direct = rho.partial_trace(&[0])?;
    println!(
        "Tr_B via Choi state vs direct: {:.2e}",
        via_choi.matrix().max_abs_diff(direct.matrix())
    );

    let phi = DensityOperator::max_entangled(2);
    println!("marginal of phi+: {:?}", phi.partial_trace(&[0])?.eigenvalues());
    Ok(())
}
