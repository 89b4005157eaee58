//! Von Neumann entropy and its conditional and mutual forms, in bits.

use crate::error::{Error, Result};
use crate::linalg::state::DensityOperator;

/// `-sum p log2 p` with `0 log 0 = 0`; eigenvalues below zero from
/// rounding are dropped.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_bits(&[p, 1.0 - p])
}

pub fn von_neumann(rho: &DensityOperator) -> f64 {
    shannon_bits(&rho.eigenvalues())
}

pub(crate) fn bipartite(rho: &DensityOperator) -> Result<(usize, usize)> {
    match rho.dims() {
        [a, b] => Ok((*a, *b)),
        d => Err(Error::DimensionMismatch(format!(
            "expected a bipartite state, got dims {d:?}"
        ))),
    }
}

pub(crate) fn tripartite(rho: &DensityOperator) -> Result<(usize, usize, usize)> {
    match rho.dims() {
        [a, b, c] => Ok((*a, *b, *c)),
        d => Err(Error::DimensionMismatch(format!(
            "expected a tripartite state, got dims {d:?}"
        ))),
    }
}

/// `H(A|B) = H(AB) - H(B)`.
pub fn conditional_vn(rho: &DensityOperator) -> Result<f64> {
    bipartite(rho)?;
    Ok(von_neumann(rho) - von_neumann(&rho.partial_trace(&[1])?))
}

/// `I(A;B) = H(A) + H(B) - H(AB)`.
pub fn mutual_information(rho: &DensityOperator) -> Result<f64> {
    bipartite(rho)?;
    let a = von_neumann(&rho.partial_trace(&[0])?);
    let b = von_neumann(&rho.partial_trace(&[1])?);
    Ok(a + b - von_neumann(rho))
}

/// `H(A|B) + H(A|C)` for a state on `A ⊗ B ⊗ C`.
pub fn ssa_uncertainty_gap(rho: &DensityOperator) -> Result<f64> {
    tripartite(rho)?;
    let ab = rho.partial_trace(&[0, 1])?;
    let ac = rho.partial_trace(&[0, 2])?;
    Ok(conditional_vn(&ab)? + conditional_vn(&ac)?)
}
