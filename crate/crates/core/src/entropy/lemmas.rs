//! Numerical checks of the entropy inequalities used in the security
//! argument, all at zero smoothing.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::minmax::{max_entropy, min_entropy};
use super::vn::{bipartite, ssa_uncertainty_gap, tripartite};
use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::random::random_density;
use crate::linalg::state::{DensityOperator, TRACE_TOL};
use crate::rng;

/// Tolerance for inequalities between SDP-computed entropies.
pub const SDP_LEMMA_TOL: f64 = 1e-6;
/// Tolerance for the exact von Neumann inequality.
pub const VN_LEMMA_TOL: f64 = 1e-9;

/// `H_min(A|B) - H_min(A|BC)`.
pub fn ssa_min_entropy_gap(rho: &DensityOperator, tol: f64) -> Result<f64> {
    let (a, b, c) = tripartite(rho)?;
    let ab = rho.partial_trace(&[0, 1])?;
    let a_bc = rho.regroup(vec![a, b * c])?;
    Ok(min_entropy(&ab, tol)?.0 - min_entropy(&a_bc, tol)?.0)
}

/// `H_max(A|B) - H_min(A|B)`.
pub fn min_max_gap(rho: &DensityOperator, tol: f64) -> Result<f64> {
    Ok(max_entropy(rho, tol)? - min_entropy(rho, tol)?.0)
}

/// `sum_j p_j rho_j ⊗ |j><j|` with every `rho_j` on the same `A ⊗ B`.
#[derive(Clone, Debug)]
pub struct CqState {
    components: Vec<(f64, DensityOperator)>,
}

impl CqState {
    pub fn new(components: Vec<(f64, DensityOperator)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Domain("cq state needs a component".into()))?;
        let dims = first.1.dims().to_vec();
        if dims.len() != 2 {
            return Err(Error::DimensionMismatch("cq components must be bipartite".into()));
        }
        let total: f64 = components.iter().map(|c| c.0).sum();
        if components.iter().any(|c| c.0 < 0.0) || (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::Domain(format!("weights must be a distribution (sum {total})")));
        }
        if components.iter().any(|c| c.1.dims() != dims.as_slice()) {
            return Err(Error::DimensionMismatch("cq components differ in shape".into()));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, DensityOperator)] {
        &self.components
    }

    /// The embedded state on `A ⊗ B ⊗ J`.
    pub fn embed(&self) -> DensityOperator {
        let k = self.components.len();
        let dims = self.components[0].1.dims().to_vec();
        let mut m = ComplexMatrix::zeros(dims[0] * dims[1] * k, dims[0] * dims[1] * k);
        for (j, (p, rho)) in self.components.iter().enumerate() {
            m += &rho.matrix().scale(*p).kron(&ComplexMatrix::basis_projector(k, j));
        }
        DensityOperator::from_parts_unchecked(m, vec![dims[0], dims[1], k], true)
    }
}

/// `H_max(A|BJ) - sum_j p_j H_max(A|B)_{rho_j}`.
pub fn max_concavity_gap(cq: &CqState, tol: f64) -> Result<f64> {
    let emb = cq.embed();
    let d = emb.dims().to_vec();
    let joint = max_entropy(&emb.regroup(vec![d[0], d[1] * d[2]])?, tol)?;
    let mut avg = 0.0;
    for (p, rho) in cq.components() {
        bipartite(rho)?;
        if *p > 0.0 {
            avg += p * max_entropy(rho, tol)?;
        }
    }
    Ok(joint - avg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lemma {
    #[serde(rename = "ssa_uncertainty")]
    SsaUncertainty,
    #[serde(rename = "ssa_min_entropy")]
    SsaMinEntropy,
    #[serde(rename = "min_max")]
    MinMax,
    #[serde(rename = "max_concavity")]
    MaxConcavity,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [
        Lemma::SsaUncertainty,
        Lemma::SsaMinEntropy,
        Lemma::MinMax,
        Lemma::MaxConcavity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Lemma::SsaUncertainty => "ssa_uncertainty",
            Lemma::SsaMinEntropy => "ssa_min_entropy",
            Lemma::MinMax => "min_max",
            Lemma::MaxConcavity => "max_concavity",
        }
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            Lemma::SsaUncertainty => VN_LEMMA_TOL,
            _ => SDP_LEMMA_TOL,
        }
    }

    fn stream_offset(&self) -> u64 {
        match self {
            Lemma::SsaUncertainty => 0,
            Lemma::SsaMinEntropy => 1 << 32,
            Lemma::MinMax => 2 << 32,
            Lemma::MaxConcavity => 3 << 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaRow {
    pub lemma: Lemma,
    pub trial: usize,
    pub gap: f64,
    pub pass: bool,
}

fn random_rank_state<R: Rng>(dims: Vec<usize>, rng: &mut R) -> DensityOperator {
    let d: usize = dims.iter().product();
    let k = rng.random_range(1..=d);
    random_density(dims, k, rng)
}

/// One trial of `lemma` on random states of shape `dims = (a, b, c)`;
/// bipartite lemmas use `(a, b)`.
pub fn lemma_trial(lemma: Lemma, dims: (usize, usize, usize), seed: u64, trial: usize, tol: f64) -> Result<LemmaRow> {
    let mut r = rng::stream(seed, lemma.stream_offset() + trial as u64);
    let (a, b, c) = dims;
    let gap = match lemma {
        Lemma::SsaUncertainty => ssa_uncertainty_gap(&random_rank_state(vec![a, b, c], &mut r))?,
        Lemma::SsaMinEntropy => ssa_min_entropy_gap(&random_rank_state(vec![a, b, c], &mut r), tol)?,
        Lemma::MinMax => min_max_gap(&random_rank_state(vec![a, b], &mut r), tol)?,
        Lemma::MaxConcavity => {
            let p: f64 = r.random_range(0.05..0.95);
            let s0 = random_rank_state(vec![a, b], &mut r);
            let s1 = random_rank_state(vec![a, b], &mut r);
            max_concavity_gap(&CqState::new(vec![(p, s0), (1.0 - p, s1)])?, tol)?
        }
    };
    Ok(LemmaRow {
        lemma,
        trial,
        gap,
        pass: gap >= -lemma.tolerance(),
    })
}

/// Runs `trials` independent trials of `lemma`, in trial order.
pub fn run_lemma(
    lemma: Lemma,
    trials: usize,
    dims: (usize, usize, usize),
    seed: u64,
    tol: f64,
) -> Result<Vec<LemmaRow>> {
    (0..trials)
        .into_par_iter()
        .map(|t| lemma_trial(lemma, dims, seed, t, tol))
        .collect()
}
