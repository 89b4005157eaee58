//! Small-instance checks of the one-shot decoupling bound with `Φ` the
//! partial trace onto the first `m` qubits, and of both stages of the
//! guess-to-overlap chain.

use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::UnitaryEnsemble;
use crate::entropy::minmax::{min_entropy, recovery_channel};
use crate::error::{Error, Result};
use crate::linalg::matrix::{self, ComplexMatrix};
use crate::linalg::state::DensityOperator;
use crate::qecm::game::contract_first;
use crate::qecm::helstrom::helstrom_update;
use crate::qecm::scheme::Estimate;
use crate::qecm::BinaryPovm;

/// Slack for the exact-mode margin.
pub const EXACT_MARGIN_TOL: f64 = 1e-8;
/// Slack for the guess-probability inequality.
pub const GUESS_TOL: f64 = 1e-8;
/// Slack for the overlap conclusion.
pub const OVERLAP_TOL: f64 = 1e-6;
/// Solver tolerance for every min-entropy evaluated here.
pub const SDP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecouplingMode {
    /// Uniform average over an enumerated 2-design.
    #[serde(rename = "exact-2-design")]
    Exact,
    /// Ensemble elements are i.i.d. samples; the mean carries a standard error.
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecouplingReport {
    pub lhs: f64,
    pub lhs_std_err: f64,
    pub rhs: f64,
    pub margin: f64,
    pub mode: DecouplingMode,
    pub h_min_ae: f64,
    pub h_min_tau: f64,
    pub pass: bool,
}

fn qubit_count(d: usize) -> Result<usize> {
    if d == 0 || !d.is_power_of_two() {
        return Err(Error::DimensionMismatch(format!(
            "dimension {d} is not a qubit register"
        )));
    }
    Ok(d.trailing_zeros() as usize)
}

/// Choi state of `Tr_{last n-m}` on `n` qubits: `phi+` between the first
/// `m` qubits and the output, maximally mixed on the rest, ordered
/// `(A, B)` with `dims = [2^n, 2^m]`.
pub fn partial_trace_choi(n: usize, m: usize) -> Result<DensityOperator> {
    if m > n {
        return Err(Error::Domain(format!("cannot keep {m} of {n} qubits")));
    }
    let (d1, d2) = (1usize << m, 1usize << (n - m));
    let phi = DensityOperator::max_entangled(d1);
    let omega = DensityOperator::maximally_mixed(vec![d2]);
    // (A1, B) ⊗ A2 -> (A1, A2, B)
    let joint = phi.regroup(vec![d1, d1])?.tensor(&omega);
    let ordered = joint.permute(&[0, 2, 1])?;
    ordered.regroup(vec![d1 * d2, d1])
}

/// `‖Tr_{last n-m}[(U⊗1) rho (U⊗1)^†] - omega_{2^m} ⊗ rho_E‖_Tr`.
fn decoupling_distance(
    rho: &ComplexMatrix,
    da: usize,
    de: usize,
    keep: usize,
    u: &ComplexMatrix,
    target: &ComplexMatrix,
) -> Result<f64> {
    let rotated = matrix::conjugate_on(rho, &[da, de], 0, u)?;
    let (reduced, _) = matrix::partial_trace(&rotated, &[keep, da / keep, de], &[0, 2])?;
    Ok((&reduced - target).trace_norm())
}

/// Averages the decoupling distance over `ensemble` and compares it with
/// `2^{-H_min(A|E)/2 - H_min(A|B)_tau/2 - 1}`.
pub fn decoupling_verify(
    rho: &DensityOperator,
    keep_qubits: usize,
    ensemble: &UnitaryEnsemble,
    mode: DecouplingMode,
) -> Result<DecouplingReport> {
    if rho.dims().len() != 2 {
        return Err(Error::DimensionMismatch("expected a state on A ⊗ E".into()));
    }
    let (da, de) = (rho.dims()[0], rho.dims()[1]);
    let n = qubit_count(da)?;
    if ensemble.dim() != da {
        return Err(Error::DimensionMismatch(format!(
            "ensemble acts on dimension {}, register A has {da}",
            ensemble.dim()
        )));
    }
    if keep_qubits == 0 || keep_qubits > n {
        return Err(Error::Domain(format!("keep 1..={n} qubits, got {keep_qubits}")));
    }
    let keep = 1usize << keep_qubits;
    let rho_e = rho.partial_trace(&[1])?;
    let target = ComplexMatrix::identity(keep)
        .scale(1.0 / keep as f64)
        .kron(rho_e.matrix());
    let values: Vec<f64> = ensemble
        .elements()
        .par_iter()
        .map(|u| decoupling_distance(rho.matrix(), da, de, keep, u, &target))
        .collect::<Result<_>>()?;
    let est = Estimate::from_values(&values, mode == DecouplingMode::Exact);
    let (h_ae, _) = min_entropy(rho, SDP_TOL)?;
    let (h_tau, _) = min_entropy(&partial_trace_choi(n, keep_qubits)?, SDP_TOL)?;
    let rhs = (-0.5 * h_ae - 0.5 * h_tau - 1.0).exp2();
    let lhs_std_err = est.std_error.unwrap_or(0.0);
    let margin = rhs - est.value;
    let pass = match mode {
        DecouplingMode::Exact => margin >= -EXACT_MARGIN_TOL,
        DecouplingMode::MonteCarlo => margin >= -3.0 * lhs_std_err,
    };
    Ok(DecouplingReport {
        lhs: est.value,
        lhs_std_err,
        rhs,
        margin,
        mode,
        h_min_ae: h_ae,
        h_min_tau: h_tau,
        pass,
    })
}

/// Alice's measurement for key `U`: `U (|b><b| ⊗ 1) U^†` on the first qubit.
pub fn alice_povm(u: &ComplexMatrix) -> BinaryPovm {
    let d = u.rows();
    let half = d / 2;
    let p0 = ComplexMatrix::from_real_diagonal(&(0..d).map(|i| if i < half { 1.0 } else { 0.0 }).collect::<Vec<_>>());
    let e0 = (&(u * &p0) * &u.adjoint()).hermitian_part();
    let e1 = &ComplexMatrix::identity(d) - &e0;
    BinaryPovm::from_parts_unchecked(e0, e1.hermitian_part())
}

/// Bob's best response per key: Helstrom on `Tr_A[(A^U_b ⊗ 1) rho]`.
pub fn helstrom_bob(rho: &DensityOperator, ensemble: &UnitaryEnsemble) -> Result<Vec<BinaryPovm>> {
    let (da, db) = bipartite_dims(rho, ensemble)?;
    ensemble
        .elements()
        .par_iter()
        .map(|u| {
            let a = alice_povm(u);
            let m0 = contract_first(rho.matrix(), da, db, a.element(0)).hermitian_part();
            let m1 = contract_first(rho.matrix(), da, db, a.element(1)).hermitian_part();
            helstrom_update(&m0, &m1)
        })
        .collect()
}

fn bipartite_dims(rho: &DensityOperator, ensemble: &UnitaryEnsemble) -> Result<(usize, usize)> {
    if rho.dims().len() != 2 {
        return Err(Error::DimensionMismatch("expected a state on A ⊗ B".into()));
    }
    let (da, db) = (rho.dims()[0], rho.dims()[1]);
    if ensemble.dim() != da {
        return Err(Error::DimensionMismatch(format!(
            "ensemble acts on dimension {}, register A has {da}",
            ensemble.dim()
        )));
    }
    Ok((da, db))
}

/// `(E_U sum_b Tr[(A^U_b ⊗ B^U_b) rho], 1/2 + 2^{-H_min(A|B)/2 - n/2})`.
pub fn lemma1_guess_bound(rho: &DensityOperator, bob: &[BinaryPovm], ensemble: &UnitaryEnsemble) -> Result<(f64, f64)> {
    let (da, db) = bipartite_dims(rho, ensemble)?;
    let n = qubit_count(da)?;
    if bob.len() != ensemble.len() {
        return Err(Error::InvalidMeasurement(format!(
            "{} measurements for {} keys",
            bob.len(),
            ensemble.len()
        )));
    }
    for p in bob {
        if p.dim() != db {
            return Err(Error::InvalidMeasurement(format!(
                "measurement on dimension {}, B has {db}",
                p.dim()
            )));
        }
        p.check_projective()?;
    }
    let per_key: Vec<f64> = ensemble
        .elements()
        .par_iter()
        .zip(bob)
        .map(|(u, b)| {
            let a = alice_povm(u);
            (0..2)
                .map(|x| rho.matrix().trace_product(&a.element(x).kron(b.element(x))).re)
                .sum::<f64>()
        })
        .collect();
    let guess = per_key.iter().sum::<f64>() / per_key.len() as f64;
    let (h, _) = min_entropy(rho, SDP_TOL)?;
    let bound = 0.5 + (-0.5 * h - 0.5 * n as f64).exp2();
    Ok((guess, bound))
}

/// `sum_x Tr[(A_x ⊗ conj(A_x)) (1 ⊗ E)(rho)]` with `E` the optimal recovery
/// channel, and whether it reaches `epsilon^2 - 1e-6`.
pub fn lemma1_overlap_check(rho: &DensityOperator, epsilon: f64, alice: &[ComplexMatrix]) -> Result<(f64, bool)> {
    if rho.dims().len() != 2 {
        return Err(Error::DimensionMismatch("expected a state on A ⊗ B".into()));
    }
    let da = rho.dims()[0];
    check_pvm(alice, da)?;
    let (_, sol) = min_entropy(rho, SDP_TOL)?;
    let rec = recovery_channel(rho, &sol)?;
    let out = rec.channel.apply_on_subsystem(rho, 1)?;
    let overlap: f64 = alice
        .iter()
        .map(|a| out.matrix().trace_product(&a.kron(&a.conj())).re)
        .sum();
    Ok((overlap, overlap >= epsilon * epsilon - OVERLAP_TOL))
}

fn check_pvm(ops: &[ComplexMatrix], d: usize) -> Result<()> {
    if ops.is_empty() {
        return Err(Error::InvalidMeasurement("empty measurement".into()));
    }
    let mut sum = ComplexMatrix::zeros(d, d);
    for p in ops {
        if p.rows() != d || p.cols() != d {
            return Err(Error::InvalidMeasurement(format!(
                "element is {}x{}, expected {d}x{d}",
                p.rows(),
                p.cols()
            )));
        }
        if (&(p * p) - p).max_abs() > 1e-9 || !p.is_hermitian(1e-9) {
            return Err(Error::InvalidMeasurement(
                "element is not an orthogonal projector".into(),
            ));
        }
        sum += p;
    }
    if sum.max_abs_diff(&ComplexMatrix::identity(d)) > 1e-9 {
        return Err(Error::InvalidMeasurement("elements do not sum to identity".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma1Row {
    pub trial: usize,
    pub guess: f64,
    pub bound: f64,
    pub epsilon: f64,
    pub overlap: f64,
    pub pass: bool,
}

/// Both stages on one state: Helstrom-optimal Bob, then the overlap for
/// Alice's measurement `alice`.
pub fn lemma1_chain(
    rho: &DensityOperator,
    ensemble: &UnitaryEnsemble,
    alice: &[ComplexMatrix],
    trial: usize,
) -> Result<Lemma1Row> {
    let bob = helstrom_bob(rho, ensemble)?;
    let (guess, bound) = lemma1_guess_bound(rho, &bob, ensemble)?;
    let epsilon = (guess - 0.5).max(0.0);
    let (overlap, overlap_ok) = lemma1_overlap_check(rho, epsilon, alice)?;
    Ok(Lemma1Row {
        trial,
        guess,
        bound,
        epsilon,
        overlap,
        pass: guess <= bound + GUESS_TOL && overlap_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_density;
    use crate::rng;

    #[test]
    fn choi_of_partial_trace_entropy() {
        let tau = partial_trace_choi(2, 1).unwrap();
        assert_eq!(tau.dims(), &[4, 2]);
        assert!((tau.trace() - 1.0).abs() < 1e-14);
        let (h, _) = min_entropy(&tau, SDP_TOL).unwrap();
        assert!(h.abs() < 1e-6);
        let (h, _) = min_entropy(&partial_trace_choi(2, 2).unwrap(), SDP_TOL).unwrap();
        assert!((h + 2.0).abs() < 1e-6);
    }

    #[test]
    fn maximally_mixed_decouples() {
        let ens = UnitaryEnsemble::clifford(2).unwrap();
        let rho = DensityOperator::maximally_mixed(vec![4, 4]);
        let rep = decoupling_verify(&rho, 1, &ens, DecouplingMode::Exact).unwrap();
        assert!(rep.lhs.abs() < 1e-12);
        assert!((rep.rhs - 0.25).abs() < 1e-6);
        assert!(rep.pass);
    }

    #[test]
    fn max_entangled_decoupling() {
        let ens = UnitaryEnsemble::clifford(2).unwrap();
        let rho = DensityOperator::max_entangled(4).regroup(vec![4, 4]).unwrap();
        let rep = decoupling_verify(&rho, 1, &ens, DecouplingMode::Exact).unwrap();
        assert!((rep.h_min_ae + 2.0).abs() < 1e-6);
        assert!((rep.lhs - 0.75).abs() < 1e-10);
        assert!((rep.rhs - 1.0).abs() < 1e-6);
        assert!(rep.margin >= 0.0);
    }

    #[test]
    fn random_states_exact() {
        let ens = UnitaryEnsemble::clifford(2).unwrap();
        let mut r = rng::from_seed(11);
        for _ in 0..5 {
            let rho = random_density(vec![4, 2], 8, &mut r);
            let rep = decoupling_verify(&rho, 1, &ens, DecouplingMode::Exact).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn monte_carlo_reports_error() {
        let mut r = rng::from_seed(5);
        let ens = UnitaryEnsemble::clifford_sampled(2, 200, &mut r).unwrap();
        let rho = random_density(vec![4, 2], 8, &mut r);
        let rep = decoupling_verify(&rho, 1, &ens, DecouplingMode::MonteCarlo).unwrap();
        assert!(rep.lhs_std_err > 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn monte_carlo_error_scales_as_inverse_root() {
        let mut r = rng::from_seed(6);
        let rho = random_density(vec![8, 2], 16, &mut r);
        let err = |count: usize, stream: u64| {
            let mut ur = rng::stream(6, stream);
            let ens = UnitaryEnsemble::clifford_sampled(3, count, &mut ur).unwrap();
            decoupling_verify(&rho, 1, &ens, DecouplingMode::MonteCarlo)
                .unwrap()
                .lhs_std_err
        };
        let (e1, e2, e4) = (err(400, 1), err(800, 2), err(1600, 3));
        assert!((e2 / e1 - 0.5f64.sqrt()).abs() < 0.1, "{e1} {e2}");
        assert!((e4 / e1 - 0.5).abs() < 0.1, "{e1} {e4}");
    }

    #[test]
    fn guess_bound_on_max_entangled() {
        let ens = UnitaryEnsemble::clifford(1).unwrap();
        let rho = DensityOperator::max_entangled(2);
        let bob: Vec<BinaryPovm> = ens
            .elements()
            .iter()
            .map(|u| {
                let a = alice_povm(u);
                BinaryPovm::from_parts_unchecked(a.element(0).transpose(), a.element(1).transpose())
            })
            .collect();
        let (guess, bound) = lemma1_guess_bound(&rho, &bob, &ens).unwrap();
        assert!((guess - 1.0).abs() < 1e-12);
        assert!((bound - 1.5).abs() < 1e-6);
    }

    #[test]
    fn guess_on_product_state_is_half() {
        let ens = UnitaryEnsemble::clifford(1).unwrap();
        let rho = DensityOperator::maximally_mixed(vec![2, 2]);
        let bob = helstrom_bob(&rho, &ens).unwrap();
        let (guess, bound) = lemma1_guess_bound(&rho, &bob, &ens).unwrap();
        assert!((guess - 0.5).abs() < 1e-12);
        assert!(bound >= 0.5);
    }

    #[test]
    fn overlap_on_max_entangled() {
        let rho = DensityOperator::max_entangled(2);
        let pvm = [
            ComplexMatrix::basis_projector(2, 0),
            ComplexMatrix::basis_projector(2, 1),
        ];
        let (ov, ok) = lemma1_overlap_check(&rho, 1.0, &pvm).unwrap();
        assert!((ov - 1.0).abs() < 1e-6);
        assert!(ok);
    }

    #[test]
    fn chain_on_random_states() {
        let ens = UnitaryEnsemble::clifford(1).unwrap();
        let pvm = [
            ComplexMatrix::basis_projector(2, 0),
            ComplexMatrix::basis_projector(2, 1),
        ];
        let mut r = rng::from_seed(21);
        for t in 0..10 {
            let rho = random_density(vec![2, 2], 2, &mut r);
            let row = lemma1_chain(&rho, &ens, &pvm, t).unwrap();
            assert!(row.pass, "{row:?}");
        }
    }
}
