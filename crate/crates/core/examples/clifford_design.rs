//! Tableau sampling, unitary synthesis and the 2-design identity.

use uncloneable_lab::clifford::{clifford_group_order, clifford_to_unitary, CliffordElement, UnitaryEnsemble};
use uncloneable_lab::linalg::matrix::ComplexMatrix;
use uncloneable_lab::linalg::random::complex_gaussian;
use uncloneable_lab::rng;

fn main() -> uncloneable_lab::Result<()> {
    let mut r = rng::from_seed(2);
    let c = CliffordElement::random(3, &mut r)?;
    println!("random 3-qubit element, symplectic = {}", c.is_symplectic());
    let u = clifford_to_unitary(&c)?;
    let check = &u.adjoint() * &u;
    println!(
        "unitarity error: {:.2e}",
        check.max_abs_diff(&ComplexMatrix::identity(8))
    );

    for n in [1usize, 2] {
        let ens = UnitaryEnsemble::clifford(n)?;
        let d = ens.dim();
        let x = ComplexMatrix::from_fn(d * d, d * d, |_, _| complex_gaussian(&mut r));
        println!(
            "n={n}: {} elements (order {}), second-moment twirl deviation {:.2e}",
            ens.len(),
            clifford_group_order(n as u32),
            ens.twirl_deviation(&x, 2)?
        );
    }
    Ok(())
}
