//! Finite unitary ensembles and their first two moments.

use rayon::prelude::*;

use super::enumerate::enumerate_clifford;
use super::synth::clifford_to_unitary;
use super::tableau::CliffordElement;
use crate::error::{Error, Result};
use crate::linalg::channel::swap_operator;
use crate::linalg::matrix::{conjugate_on, ComplexMatrix};
use crate::rng::LabRng;

pub const UNITARITY_TOL: f64 = 1e-10;

/// Uniformly weighted list of unitaries of a common dimension.
#[derive(Clone, Debug)]
pub struct UnitaryEnsemble {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl UnitaryEnsemble {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::Domain("empty ensemble".into()))?
            .rows();
        let id = ComplexMatrix::identity(dim);
        for u in &elements {
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::DimensionMismatch("ensemble elements differ in dimension".into()));
            }
            let dev = (&u.adjoint() * u).max_abs_diff(&id);
            if dev > UNITARITY_TOL {
                return Err(Error::Domain(format!("element is not unitary (deviation {dev:e})")));
            }
        }
        Ok(Self { dim, elements })
    }

    /// The complete Clifford group on `n` qubits, `n` in `{1, 2}`.
    pub fn clifford(n: usize) -> Result<Self> {
        let us = enumerate_clifford(n)?
            .iter()
            .map(clifford_to_unitary)
            .collect::<Result<Vec<_>>>()?;
        Self::new(us)
    }

    /// `count` uniformly sampled Clifford unitaries.
    pub fn clifford_sampled(n: usize, count: usize, rng: &mut LabRng) -> Result<Self> {
        let us = (0..count)
            .map(|_| clifford_to_unitary(&CliffordElement::random(n, rng)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(us)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `E_U[U^{⊗t} X U^{†⊗t}]`.
    pub fn twirl(&self, x: &ComplexMatrix, t: usize) -> Result<ComplexMatrix> {
        let d = self.dim;
        let big = d.pow(t as u32);
        if !(1..=2).contains(&t) {
            return Err(Error::Unsupported(format!("moment t = {t}")));
        }
        if x.rows() != big || x.cols() != big {
            return Err(Error::DimensionMismatch(format!(
                "twirl operand {}x{} for d^t = {big}",
                x.rows(),
                x.cols()
            )));
        }
        let dims = vec![d; t];
        // fixed chunking and in-order summation keep the result independent
        // of the thread count
        let parts: Vec<ComplexMatrix> = self
            .elements
            .par_chunks(64)
            .map(|chunk| {
                let mut acc = ComplexMatrix::zeros(big, big);
                for u in chunk {
                    let mut y = x.clone();
                    for k in 0..t {
                        y = conjugate_on(&y, &dims, k, u).expect("dims checked");
                    }
                    acc += &y;
                }
                acc
            })
            .collect();
        let mut sum = ComplexMatrix::zeros(big, big);
        for p in &parts {
            sum += p;
        }
        Ok(sum.scale(1.0 / self.elements.len() as f64))
    }

    /// `||E_ens[...] - Haar twirl||_Tr`.
    pub fn twirl_deviation(&self, x: &ComplexMatrix, t: usize) -> Result<f64> {
        let avg = self.twirl(x, t)?;
        let target = haar_twirl(x, self.dim, t)?;
        Ok((&avg - &target).trace_norm())
    }
}

/// Closed-form Haar twirl: `Tr X / d I` for `t = 1`; for `t = 2` the
/// mixture of the symmetric and antisymmetric projectors with weights
/// `Tr[X Pi] / Tr[Pi]`.
pub fn haar_twirl(x: &ComplexMatrix, d: usize, t: usize) -> Result<ComplexMatrix> {
    match t {
        1 => {
            if x.rows() != d || x.cols() != d {
                return Err(Error::DimensionMismatch("t = 1 operand".into()));
            }
            Ok(ComplexMatrix::identity(d).scale_c(x.trace() / d as f64))
        }
        2 => {
            if x.rows() != d * d || x.cols() != d * d {
                return Err(Error::DimensionMismatch("t = 2 operand".into()));
            }
            let id = ComplexMatrix::identity(d * d);
            let f = swap_operator(d);
            let sym = (&id + &f).scale(0.5);
            let anti = (&id - &f).scale(0.5);
            let mut out = ComplexMatrix::zeros(d * d, d * d);
            for p in [sym, anti] {
                let rank = p.trace().re;
                if rank > 0.5 {
                    let c = x.trace_product(&p) / rank;
                    out += &p.scale_c(c);
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!("moment t = {t}"))),
    }
}
