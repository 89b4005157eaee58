//! Decoupling under an exact Clifford average and the guess/overlap chain.

use uncloneable_lab::clifford::UnitaryEnsemble;
use uncloneable_lab::decoupling::{decoupling_verify, lemma1_chain, DecouplingMode};
use uncloneable_lab::linalg::matrix::ComplexMatrix;
use uncloneable_lab::linalg::random::random_density;
use uncloneable_lab::rng;

fn main() -> uncloneable_lab::Result<()> {
    let ens = UnitaryEnsemble::clifford(2)?;
    let mut r = rng::from_seed(4);
    for trial in 0..3 {
        let rho = random_density(vec![4, 2], 8, &mut r);
        let rep = decoupling_verify(&rho, 1, &ens, DecouplingMode::Exact)?;
        println!(
            "trial {trial}: distance {:.6} <= bound {:.6} (margin {:.3e})",
            rep.lhs, rep.rhs, rep.margin
        );
    }

    let one = UnitaryEnsemble::clifford(1)?;
    let pvm = [
        ComplexMatrix::basis_projector(2, 0),
        ComplexMatrix::basis_projector(2, 1),
    ];
    let rho = random_density(vec![2, 2], 2, &mut r);
    let row = lemma1_chain(&rho, &one, &pvm, 0)?;
    println!(
        "guess {:.6} <= {:.6}; overlap {:.6} >= eps^2 {:.6}",
        row.guess,
        row.bound,
        row.overlap,
        row.epsilon * row.epsilon
    );
    Ok(())
}
