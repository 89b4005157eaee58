//! Density operators with an explicit tensor-factor profile, and the
//! distance measures between them.

use super::matrix::{self, ComplexMatrix, C64, ONE};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;

/// A positive operator of trace one (or at most one, when subnormalised)
/// on a tensor product of subsystems with dimensions `dims`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    normalized: bool,
}

impl DensityOperator {
    /// Validates a normalised state. The stored matrix is the exact
    /// Hermitian part of the input.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::validated(matrix, dims, true)
    }

    /// Validates a subnormalised state (`0 < Tr <= 1`).
    pub fn subnormalized(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::validated(matrix, dims, false)
    }

    fn validated(matrix: ComplexMatrix, dims: Vec<usize>, normalized: bool) -> Result<Self> {
        let total: usize = dims.iter().product();
        if !matrix.is_square() || matrix.rows() != total || dims.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix with dims {:?}",
                matrix.rows(),
                matrix.cols(),
                dims
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if normalized {
            if (tr - 1.0).abs() > TRACE_TOL {
                return Err(Error::InvalidTrace(tr));
            }
        } else if !(tr > 0.0 && tr <= 1.0 + TRACE_TOL) {
            return Err(Error::InvalidTrace(tr));
        }
        let min = matrix.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self {
            matrix,
            dims,
            normalized,
        })
    }

    /// Wraps a matrix produced by an operation known to preserve the state
    /// invariants, taking its Hermitian part.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: Vec<usize>, normalized: bool) -> Self {
        debug_assert_eq!(matrix.rows(), dims.iter().product::<usize>());
        Self {
            matrix: matrix.hermitian_part(),
            dims,
            normalized,
        }
    }

    pub fn pure(psi: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(norm));
        }
        Self::new(ComplexMatrix::outer(psi), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self::from_parts_unchecked(ComplexMatrix::identity(d).scale(1.0 / d as f64), dims, true)
    }

    /// `|phi+><phi+|` on `d x d`, with `|phi+> = d^{-1/2} sum_a |a>|a>`.
    pub fn max_entangled(d: usize) -> Self {
        Self::from_parts_unchecked(ComplexMatrix::outer(&max_entangled_vector(d)), vec![d, d], true)
    }

    pub fn basis_state(dims: Vec<usize>, index: usize) -> Self {
        let d: usize = dims.iter().product();
        Self::from_parts_unchecked(ComplexMatrix::basis_projector(d, index), dims, true)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.eigenvalues_hermitian()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_parts_unchecked(
            self.matrix.kron(&other.matrix),
            dims,
            self.normalized && other.normalized,
        )
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let (m, dims) = matrix::partial_trace(&self.matrix, &self.dims, keep)?;
        if dims.is_empty() {
            return Err(Error::DimensionMismatch(
                "partial trace must keep at least one subsystem".into(),
            ));
        }
        Ok(Self::from_parts_unchecked(m, dims, self.normalized))
    }

    /// New subsystem `i` is old subsystem `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let m = matrix::permute_subsystems(&self.matrix, &self.dims, perm)?;
        let dims = perm.iter().map(|&p| self.dims[p]).collect();
        Ok(Self::from_parts_unchecked(m, dims, self.normalized))
    }

    /// Reinterprets the tensor-factor profile (e.g. grouping `B,C` into one
    /// register). The total dimension must be unchanged.
    pub fn regroup(&self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() || dims.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "cannot regroup {:?} as {:?}",
                self.dims, dims
            )));
        }
        Ok(Self {
            matrix: self.matrix.clone(),
            dims,
            normalized: self.normalized,
        })
    }

    /// `U rho U^dagger` for a unitary on the whole space.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} unitary on dimension {}",
                u.rows(),
                u.cols(),
                self.dim()
            )));
        }
        let m = &(u * &self.matrix) * &u.adjoint();
        Ok(Self::from_parts_unchecked(m, self.dims.clone(), self.normalized))
    }

    /// Conjugation by a unitary acting on subsystem `k` only.
    pub fn conjugate_subsystem(&self, k: usize, u: &ComplexMatrix) -> Result<Self> {
        let m = matrix::conjugate_on(&self.matrix, &self.dims, k, u)?;
        Ok(Self::from_parts_unchecked(m, self.dims.clone(), self.normalized))
    }

    /// Convex combination of states with identical profiles.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Domain("empty mixture".into()))?.1;
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if parts.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::Domain("mixture weights must be a probability vector".into()));
        }
        let mut m = ComplexMatrix::zeros(first.dim(), first.dim());
        for (p, s) in parts {
            if s.dims != first.dims {
                return Err(Error::DimensionMismatch("mixture of differently shaped states".into()));
            }
            m += &s.matrix.scale(*p);
        }
        let normalized = parts.iter().all(|(_, s)| s.normalized);
        Ok(Self::from_parts_unchecked(m, first.dims.clone(), normalized))
    }

    /// Expectation `Tr[M rho]` of a Hermitian observable.
    pub fn expectation(&self, observable: &ComplexMatrix) -> f64 {
        observable.trace_product(&self.matrix).re
    }
}

pub fn max_entangled_vector(d: usize) -> Vec<C64> {
    let amp = ONE * (1.0 / (d as f64).sqrt());
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    for a in 0..d {
        v[a * d + a] = amp;
    }
    v
}

/// Kronecker product of two plain matrices.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

fn same_shape(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// `||rho - sigma||_Tr = ||rho - sigma||_1 / 2`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_shape(rho, sigma)?;
    Ok((rho.matrix() - sigma.matrix()).trace_norm())
}

/// `F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_shape(rho, sigma)?;
    let prod = &rho.matrix().sqrt_psd() * &sigma.matrix().sqrt_psd();
    Ok(prod.schatten1())
}

/// `F*(rho, sigma) = F(rho, sigma) + sqrt((1 - Tr rho)(1 - Tr sigma))`.
pub fn generalized_fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    let slack = ((1.0 - rho.trace()).max(0.0) * (1.0 - sigma.trace()).max(0.0)).sqrt();
    Ok(f + slack)
}

/// `P(rho, sigma) = sqrt(1 - F*(rho, sigma)^2)`.
pub fn purified_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let f = generalized_fidelity(rho, sigma)?.min(1.0);
    Ok((1.0 - f * f).max(0.0).sqrt())
}

/// `||rho - sigma||_Tr + |Tr rho - Tr sigma| / 2`.
pub fn generalized_trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(trace_distance(rho, sigma)? + 0.5 * (rho.trace() - sigma.trace()).abs())
}
