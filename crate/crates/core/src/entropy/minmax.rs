//! Conditional min- and max-entropy at zero smoothing, and the optimal
//! recovery channel read off the dual certificate.

use super::sdp::{self, SdpOptions, SdpSolution};
use super::vn::bipartite;
use crate::error::{Error, Result};
use crate::linalg::channel::ChoiChannel;
use crate::linalg::matrix::{self, ComplexMatrix, ZERO};
use crate::linalg::state::{max_entangled_vector, DensityOperator};

/// Tolerance of the loop-closure check `|A| F^2 = 2^{-H_min}`.
pub const LOOP_CLOSURE_TOL: f64 = 1e-5;

/// `H_min(A|B)` in bits together with the solver certificate.
pub fn min_entropy(rho: &DensityOperator, tol: f64) -> Result<(f64, SdpSolution)> {
    let (da, db) = bipartite(rho)?;
    let sol = sdp::solve(
        rho.matrix(),
        da,
        db,
        SdpOptions {
            tol,
            ..SdpOptions::default()
        },
    )?;
    if sol.primal_value <= 0.0 {
        return Err(Error::Domain("min-entropy of a zero operator".into()));
    }
    Ok((-sol.primal_value.log2(), sol))
}

/// Canonical purification `sum_k sqrt(λ_k) |v_k>_AB |k>_E` of a bipartite
/// state, returned as the marginal on `A ⊗ E` with `dim E = rank`.
pub fn purified_marginal(rho: &DensityOperator) -> Result<DensityOperator> {
    let (da, db) = bipartite(rho)?;
    let eig = rho.matrix().eigh();
    let lmax = eig.values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > 1e-14 * lmax.max(1e-300))
        .collect();
    let r = keep.len().max(1);
    let mut out = ComplexMatrix::zeros(da * r, da * r);
    for (e1, &k1) in keep.iter().enumerate() {
        for (e2, &k2) in keep.iter().enumerate() {
            let w = (eig.values[k1] * eig.values[k2]).sqrt();
            for a in 0..da {
                for a2 in 0..da {
                    let mut acc = ZERO;
                    for b in 0..db {
                        acc += eig.vectors[(a * db + b, k1)] * eig.vectors[(a2 * db + b, k2)].conj();
                    }
                    out[(a * r + e1, a2 * r + e2)] = acc * w;
                }
            }
        }
    }
    Ok(DensityOperator::from_parts_unchecked(
        out,
        vec![da, r],
        rho.is_normalized(),
    ))
}

/// `H_max(A|B) = -H_min(A|E)` on the canonical purification.
pub fn max_entropy(rho: &DensityOperator, tol: f64) -> Result<f64> {
    let ae = purified_marginal(rho)?;
    Ok(-min_entropy(&ae, tol)?.0)
}

/// A recovery channel `E: B -> A'` and its loop-closure numbers.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub channel: ChoiChannel,
    /// `|A| <phi+|(id ⊗ E)(rho)|phi+>`.
    pub achieved: f64,
    /// `2^{-H_min(A|B)}` from the solver.
    pub target: f64,
    pub used_fallback: bool,
}

/// Channel `B -> A'` whose unnormalised Choi matrix is the partial
/// transpose-and-swap of `X + I/|A| ⊗ (I - Tr_A X)`.
pub fn channel_from_dual(x: &ComplexMatrix, da: usize, db: usize) -> Result<ChoiChannel> {
    let n = matrix::partial_trace(x, &[da, db], &[1])?.0;
    let completion = ComplexMatrix::identity(da)
        .scale(1.0 / da as f64)
        .kron(&(&ComplexMatrix::identity(db) - &n));
    let xc = x + &completion;
    let mut j = ComplexMatrix::zeros(db * da, db * da);
    for i in 0..db {
        for a in 0..da {
            for i2 in 0..db {
                for a2 in 0..da {
                    j[(i * da + a, i2 * da + a2)] = xc[(a2 * db + i2, a * db + i)] / db as f64;
                }
            }
        }
    }
    ChoiChannel::from_choi(j.hermitian_part(), vec![db], vec![da])
}

/// `|A| <phi+| (id ⊗ E)(rho) |phi+>` for `E: B -> A'`.
pub fn ebit_fraction(rho: &DensityOperator, chan: &ChoiChannel) -> Result<f64> {
    let (da, _) = bipartite(rho)?;
    if chan.d_out() != da {
        return Err(Error::DimensionMismatch("recovery output must match A".into()));
    }
    let out = chan.apply_on_subsystem(rho, 1)?;
    let phi = max_entangled_vector(da);
    Ok(da as f64 * out.matrix().sandwich(&phi, &phi).re)
}

fn normalize_dual(y: &ComplexMatrix, da: usize, db: usize) -> Option<ComplexMatrix> {
    let n = matrix::partial_trace(y, &[da, db], &[1]).ok()?.0.hermitian_part();
    let eig = n.eigh();
    if eig.values.iter().any(|&l| l <= 1e-300) {
        return None;
    }
    let isq = eig.reconstruct_with(|l| 1.0 / l.sqrt());
    let lift = ComplexMatrix::identity(da).kron(&isq);
    Some((&(&lift * y) * &lift).hermitian_part())
}

/// Extracts the recovery channel from the dual certificate, falling back
/// to a fixed-point ascent `X <- normalise(X rho X)` when the certificate
/// does not close the loop.
pub fn recovery_channel(rho: &DensityOperator, sol: &SdpSolution) -> Result<Recovery> {
    let (da, db) = bipartite(rho)?;
    if sol.dims != (da, db) {
        return Err(Error::DimensionMismatch("solution belongs to a different split".into()));
    }
    let target = sol.primal_value;
    let channel = channel_from_dual(&sol.dual, da, db)?;
    let achieved = ebit_fraction(rho, &channel)?;
    if (achieved - target).abs() <= LOOP_CLOSURE_TOL {
        return Ok(Recovery {
            channel,
            achieved,
            target,
            used_fallback: false,
        });
    }
    let mut x = sol.dual.clone();
    let mut best = (achieved, channel);
    for _ in 0..500 {
        let y = &(&x * rho.matrix()) * &x;
        let Some(next) = normalize_dual(&y, da, db) else { break };
        x = next;
        let chan = channel_from_dual(&x, da, db)?;
        let val = ebit_fraction(rho, &chan)?;
        if val > best.0 {
            best = (val, chan);
        }
        if (best.0 - target).abs() <= LOOP_CLOSURE_TOL {
            break;
        }
    }
    if (best.0 - target).abs() <= LOOP_CLOSURE_TOL {
        Ok(Recovery {
            channel: best.1,
            achieved: best.0,
            target,
            used_fallback: true,
        })
    } else {
        Err(Error::Extraction {
            achieved: best.0,
            target,
        })
    }
}

/// Convenience: fidelity-form check `|A| F((id ⊗ E)(rho), phi+)^2`.
pub fn ebit_fidelity_squared(rho: &DensityOperator, chan: &ChoiChannel) -> Result<f64> {
    let (da, _) = bipartite(rho)?;
    Ok(ebit_fraction(rho, chan)? / da as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::vn::conditional_vn;
    use crate::linalg::matrix::C64;
    use crate::linalg::random::random_density;
    use crate::rng;

    fn classical(d: usize) -> DensityOperator {
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for a in 0..d {
            m[(a * d + a, a * d + a)] = C64::new(1.0 / d as f64, 0.0);
        }
        DensityOperator::new(m, vec![d, d]).unwrap()
    }

    #[test]
    fn closed_forms() {
        for d in [2, 3, 4] {
            let (h, sol) = min_entropy(&DensityOperator::max_entangled(d), 1e-8).unwrap();
            assert!((h + (d as f64).log2()).abs() < 1e-6);
            assert!(sol.gap <= 1e-8);
        }
        let mut r = rng::from_seed(12);
        let ra = random_density(vec![2], 2, &mut r);
        let rb = random_density(vec![3], 3, &mut r);
        let (h, _) = min_entropy(&ra.tensor(&rb), 1e-8).unwrap();
        assert!((h + ra.matrix().max_eigenvalue().log2()).abs() < 1e-6);
        let (h, _) = min_entropy(&classical(2), 1e-8).unwrap();
        assert!(h.abs() < 1e-6);
    }

    #[test]
    fn max_entropy_examples() {
        let phi = DensityOperator::max_entangled(2);
        assert!((max_entropy(&phi, 1e-8).unwrap() + 1.0).abs() < 1e-6);
        let w0 = DensityOperator::maximally_mixed(vec![2]).tensor(&DensityOperator::basis_state(vec![2], 0));
        assert!((max_entropy(&w0, 1e-8).unwrap() - 1.0).abs() < 1e-6);
        let p = DensityOperator::basis_state(vec![2, 2], 0);
        assert!(max_entropy(&p, 1e-8).unwrap().abs() < 1e-6);
    }

    #[test]
    fn ordering_on_random_states() {
        let mut r = rng::from_seed(13);
        for _ in 0..20 {
            let rho = random_density(vec![2, 2], 3, &mut r);
            let hmin = min_entropy(&rho, 1e-8).unwrap().0;
            let h = conditional_vn(&rho).unwrap();
            let hmax = max_entropy(&rho, 1e-8).unwrap();
            assert!(hmin <= h + 1e-6 && h <= hmax + 1e-6);
        }
    }

    #[test]
    fn loop_closure() {
        let phi = DensityOperator::max_entangled(2);
        let (_, sol) = min_entropy(&phi, 1e-8).unwrap();
        let rec = recovery_channel(&phi, &sol).unwrap();
        assert!((ebit_fidelity_squared(&phi, &rec.channel).unwrap() - 1.0).abs() < 1e-6);

        let cc = classical(2);
        let (_, sol) = min_entropy(&cc, 1e-8).unwrap();
        let rec = recovery_channel(&cc, &sol).unwrap();
        assert!((ebit_fidelity_squared(&cc, &rec.channel).unwrap() - 0.5).abs() < 1e-6);

        let mut r = rng::from_seed(14);
        for _ in 0..20 {
            let rho = random_density(vec![2, 2], 4, &mut r);
            let (_, sol) = min_entropy(&rho, 1e-8).unwrap();
            let rec = recovery_channel(&rho, &sol).unwrap();
            assert!(!rec.used_fallback);
            assert!((rec.achieved - rec.target).abs() < LOOP_CLOSURE_TOL);
        }
    }

    #[test]
    fn fallback_ascent_recovers_identity() {
        let phi = DensityOperator::max_entangled(2);
        let (_, mut sol) = min_entropy(&phi, 1e-8).unwrap();
        sol.dual = ComplexMatrix::identity(4).scale(0.5);
        let rec = recovery_channel(&phi, &sol).unwrap();
        assert!(rec.used_fallback);
        assert!((rec.achieved - 2.0).abs() < 1e-5);
    }
}
