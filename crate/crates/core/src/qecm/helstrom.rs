//! Best binary measurement against a pair of score operators.

use super::povm::BinaryPovm;
use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;

/// `{P, I - P}` maximising `Tr[B0 M0] + Tr[B1 M1]`, where `P` projects onto
/// the nonnegative eigenspace of `M0 - M1`. Null directions go to outcome 0.
pub fn helstrom_update(m0: &ComplexMatrix, m1: &ComplexMatrix) -> Result<BinaryPovm> {
    if m0.rows() != m1.rows() || !m0.is_square() || !m1.is_square() {
        return Err(Error::DimensionMismatch("score operators differ in shape".into()));
    }
    for m in [m0, m1] {
        let scale = m.max_abs().max(1.0);
        let dev = m.hermitian_deviation();
        if dev > 1e-10 * scale {
            return Err(Error::NotHermitian(dev));
        }
    }
    let diff = (m0 - m1).hermitian_part();
    let cut = -1e-13 * diff.max_abs().max(1.0);
    let p = diff.eigh().projector(|l| l >= cut);
    let comp = &ComplexMatrix::identity(m0.rows()) - &p;
    Ok(BinaryPovm::from_parts_unchecked(p, comp))
}

/// `Tr[B0 M0] + Tr[B1 M1]`.
pub fn povm_score(povm: &BinaryPovm, m0: &ComplexMatrix, m1: &ComplexMatrix) -> f64 {
    povm.element(0).trace_product(m0).re + povm.element(1).trace_product(m1).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{haar_unitary, random_density};
    use crate::rng;

    #[test]
    fn tie_goes_to_zero() {
        let m = ComplexMatrix::identity(3).scale(0.2);
        let p = helstrom_update(&m, &m).unwrap();
        assert!(p.element(0).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn orthogonal_supports() {
        let m0 = ComplexMatrix::basis_projector(2, 0);
        let m1 = ComplexMatrix::basis_projector(2, 1);
        let p = helstrom_update(&m0, &m1).unwrap();
        assert!(p.element(0).max_abs_diff(&m0) < 1e-12);
        // as a discrimination success probability, 1/2 (score) = 1
        assert!((0.5 * povm_score(&p, &m0, &m1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beats_random_measurements() {
        let mut r = rng::from_seed(4);
        let m0 = random_density(vec![3], 3, &mut r).into_matrix();
        let m1 = random_density(vec![3], 3, &mut r).into_matrix();
        let best = povm_score(&helstrom_update(&m0, &m1).unwrap(), &m0, &m1);
        for _ in 0..1000 {
            let u = haar_unitary(3, &mut r);
            let w: f64 = rand::Rng::random(&mut r);
            let diag = ComplexMatrix::from_real_diagonal(&[w, 1.0 - w, 0.5]);
            let e0 = &(&u * &diag) * &u.adjoint();
            let e1 = &ComplexMatrix::identity(3) - &e0;
            let povm = BinaryPovm::new(e0, e1).unwrap();
            assert!(povm_score(&povm, &m0, &m1) <= best + 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = crate::linalg::matrix::ONE;
        assert!(matches!(
            helstrom_update(&m, &ComplexMatrix::zeros(2, 2)),
            Err(Error::NotHermitian(_))
        ));
    }
}
