//! Random states and unitaries.

use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, C64};
use super::state::DensityOperator;

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random unit vector in `C^d`.
pub fn random_pure_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> DensityOperator {
    let d: usize = dims.iter().product();
    let v = random_pure_vector(d, rng);
    DensityOperator::from_parts_unchecked(ComplexMatrix::outer(&v), dims, true)
}

/// Induced-measure random state `G G^dagger / Tr`, with `G` a `d x k`
/// Ginibre matrix. `k = d` gives the Hilbert–Schmidt measure.
pub fn random_density<R: Rng + ?Sized>(dims: Vec<usize>, k: usize, rng: &mut R) -> DensityOperator {
    let d: usize = dims.iter().product();
    let g = ComplexMatrix::from_fn(d, k.max(1), |_, _| complex_gaussian(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityOperator::from_parts_unchecked(m.scale(1.0 / tr), dims, true)
}

/// Haar-random unitary: Gram–Schmidt on a Ginibre matrix, which fixes the
/// phases of the implicit `R` factor to be positive.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (j, c) in cols.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

/// Rank-one projective measurement in a Haar-random basis, returned as
/// `outcomes` projectors (basis vectors are distributed round-robin).
pub fn random_pvm<R: Rng + ?Sized>(d: usize, outcomes: usize, rng: &mut R) -> Vec<ComplexMatrix> {
    let u = haar_unitary(d, rng);
    let mut ops = vec![ComplexMatrix::zeros(d, d); outcomes];
    for j in 0..d {
        let col = u.column(j);
        ops[j % outcomes] += &ComplexMatrix::outer(&col);
    }
    if ops.iter().all(|o| o.max_abs() == 0.0) {
        ops[0] = ComplexMatrix::identity(d);
    }
    ops
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut r = rng::from_seed(1);
        for d in [1, 2, 3, 8] {
            let u = haar_unitary(d, &mut r);
            let p = &u.adjoint() * &u;
            assert!(p.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
        }
    }

    #[test]
    fn random_density_is_valid() {
        let mut r = rng::from_seed(2);
        let rho = random_density(vec![2, 3], 2, &mut r);
        let again = DensityOperator::new(rho.matrix().clone(), vec![2, 3]).unwrap();
        assert!((again.trace() - 1.0).abs() < 1e-12);
        let nonzero = rho.eigenvalues().iter().filter(|&&l| l > 1e-10).count();
        assert_eq!(nonzero, 2);
    }
}
