//! Conditional min-entropy with its dual certificate and recovery channel.

use uncloneable_lab::entropy::minmax::{max_entropy, min_entropy, recovery_channel};
use uncloneable_lab::entropy::vn::conditional_vn;
use uncloneable_lab::linalg::random::random_density;
use uncloneable_lab::linalg::state::DensityOperator;
use uncloneable_lab::rng;

fn main() -> uncloneable_lab::Result<()> {
    for d in [2, 3, 4] {
        let (h, sol) = min_entropy(&DensityOperator::max_entangled(d), 1e-9)?;
        println!(
            "phi+ d={d}: H_min(A|B) = {h:.9} (gap {:.1e}, {} iterations)",
            sol.gap, sol.iterations
        );
    }
    let mut r = rng::from_seed(3);
    let rho = random_density(vec![2, 2], 3, &mut r);
    let (h, sol) = min_entropy(&rho, 1e-9)?;
    let rec = recovery_channel(&rho, &sol)?;
    println!(
        "random state: H_min {h:.6} <= H {:.6} <= H_max {:.6}",
        conditional_vn(&rho)?,
        max_entropy(&rho, 1e-9)?
    );
    println!(
        "recovery channel: |A| F^2 = {:.9}, 2^-H_min = {:.9}",
        rec.achieved, rec.target
    );
    Ok(())
}
