//! Alternating best-response optimisation of game strategies.
//!
//! Each round updates Bob's measurements (Helstrom against his score
//! operators), then Charlie's, then the shared state. In the free mode the
//! state becomes the top eigenvector of the averaged win operator; in the
//! Choi mode it maximises the same objective subject to `rho_A = omega`,
//! so the result is the Choi state of a cloning channel.

use rayon::prelude::*;
use serde::Serialize;

use super::attack::{attack_from_strategy, CloningAttack};
use super::game::{contract_first, contract_second, per_question_values, MoEGame, Strategy};
use super::helstrom::{helstrom_update, povm_score};
use super::povm::BinaryPovm;
use super::scheme::QecmScheme;
use crate::entropy::sdp::{self, SdpOptions};
use crate::error::{Error, Result};
use crate::linalg::matrix::{self, ComplexMatrix};
use crate::linalg::random::{random_pure_state, random_pvm};
use crate::linalg::state::DensityOperator;
use crate::rng;

/// Allowed decrease of the value across a single update.
pub const MONOTONE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StateUpdate {
    Free,
    Choi,
}

#[derive(Clone, Debug)]
pub struct SeesawConfig {
    pub dim_b: usize,
    pub dim_c: usize,
    pub restarts: usize,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub state_update: StateUpdate,
}

impl SeesawConfig {
    pub fn new(dim_b: usize, dim_c: usize, seed: u64) -> Self {
        Self {
            dim_b,
            dim_c,
            restarts: 32,
            iters: 200,
            tol: 1e-10,
            seed,
            state_update: StateUpdate::Free,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RestartTrace {
    pub restart: usize,
    /// Value after every single update, starting with the initial point.
    pub values: Vec<f64>,
    pub converged: bool,
    pub final_value: f64,
    pub monotone: bool,
}

#[derive(Clone, Debug)]
pub struct SeesawResult {
    pub strategy: Strategy,
    pub value: f64,
    pub best_restart: usize,
    pub traces: Vec<RestartTrace>,
    /// Whether the best restart met the tolerance before `iters` ran out.
    pub converged: bool,
    pub monotone: bool,
}

fn value(game: &MoEGame, strat: &Strategy) -> f64 {
    per_question_values(game, strat).iter().sum::<f64>() / game.num_questions() as f64
}

/// Score operators for Bob (`bob = true`) or Charlie on every question.
fn score_operators(game: &MoEGame, strat: &Strategy, bob: bool) -> Vec<[ComplexMatrix; 2]> {
    let dims = strat.state.dims();
    let (da, db, dc) = (dims[0], dims[1], dims[2]);
    let rho = strat.state.matrix();
    (0..game.num_questions())
        .into_par_iter()
        .map(|q| {
            [0usize, 1].map(|x| {
                let r = contract_first(rho, da, db * dc, game.alice()[q].element(x));
                if bob {
                    contract_second(&r, db, dc, strat.charlie[q].element(x)).hermitian_part()
                } else {
                    contract_first(&r, db, dc, strat.bob[q].element(x)).hermitian_part()
                }
            })
        })
        .collect()
}

fn update_player(game: &MoEGame, strat: &mut Strategy, bob: bool) -> Result<()> {
    let scores = score_operators(game, strat, bob);
    let current = if bob { &strat.bob } else { &strat.charlie };
    let updated: Vec<BinaryPovm> = scores
        .iter()
        .zip(current)
        .map(|([m0, m1], old)| {
            let new = helstrom_update(m0, m1)?;
            // keep the old measurement on exact ties so rounding never
            // lowers the value
            Ok(if povm_score(&new, m0, m1) >= povm_score(old, m0, m1) {
                new
            } else {
                old.clone()
            })
        })
        .collect::<Result<_>>()?;
    if bob {
        strat.bob = updated;
    } else {
        strat.charlie = updated;
    }
    Ok(())
}

/// `E_theta sum_x A_x ⊗ B_x ⊗ C_x`.
pub fn win_operator(game: &MoEGame, bob: &[BinaryPovm], charlie: &[BinaryPovm]) -> ComplexMatrix {
    let parts: Vec<ComplexMatrix> = (0..game.num_questions())
        .into_par_iter()
        .map(|q| {
            let mut acc = game.alice()[q]
                .element(0)
                .kron(&bob[q].element(0).kron(charlie[q].element(0)));
            acc += &game.alice()[q]
                .element(1)
                .kron(&bob[q].element(1).kron(charlie[q].element(1)));
            acc
        })
        .collect();
    let mut w = ComplexMatrix::zeros(parts[0].rows(), parts[0].rows());
    for p in &parts {
        w += p;
    }
    w.scale(1.0 / game.num_questions() as f64).hermitian_part()
}

/// `max Tr[W rho]` over states with `rho_A = I/dA`, via the min-entropy
/// program with the roles of the registers exchanged.
fn best_choi_state(w: &ComplexMatrix, da: usize, db: usize, dc: usize) -> Result<ComplexMatrix> {
    let dims = [da, db, dc];
    let w_bca = matrix::permute_subsystems(w, &dims, &[1, 2, 0])?;
    let sol = sdp::solve(
        &w_bca,
        db * dc,
        da,
        SdpOptions {
            tol: 1e-11,
            max_iters: 200,
        },
    )
    .or_else(|_| sdp::solve(&w_bca, db * dc, da, SdpOptions::default()))?;
    let x = sol.dual.scale(1.0 / da as f64);
    matrix::permute_subsystems(&x, &[db, dc, da], &[2, 0, 1])
}

fn update_state(game: &MoEGame, strat: &mut Strategy, mode: StateUpdate) -> Result<()> {
    let dims = strat.state.dims().to_vec();
    let w = win_operator(game, &strat.bob, &strat.charlie);
    let candidate = match mode {
        StateUpdate::Free => {
            let eig = w.eigh();
            let top = eig.vectors.column(eig.values.len() - 1);
            ComplexMatrix::outer(&top)
        }
        StateUpdate::Choi => best_choi_state(&w, dims[0], dims[1], dims[2])?,
    };
    if w.trace_product(&candidate).re >= w.trace_product(strat.state.matrix()).re {
        strat.state = DensityOperator::from_parts_unchecked(candidate, dims, true);
    }
    Ok(())
}

/// Rescales `rho` locally on `A` so its `A` marginal is maximally mixed.
fn make_choi(rho: &DensityOperator) -> Result<DensityOperator> {
    let dims = rho.dims().to_vec();
    let marg = rho.partial_trace(&[0])?;
    let isq = marg
        .matrix()
        .eigh()
        .reconstruct_with(|l| if l > 1e-14 { 1.0 / l.sqrt() } else { 0.0 });
    let op = isq.scale(1.0 / (dims[0] as f64).sqrt());
    let m = matrix::conjugate_on(rho.matrix(), &dims, 0, &op)?;
    Ok(DensityOperator::from_parts_unchecked(m, dims, true))
}

fn initial_strategy(game: &MoEGame, cfg: &SeesawConfig, restart: usize) -> Result<Strategy> {
    let mut r = rng::stream(cfg.seed, restart as u64);
    let dims = vec![game.dim_a(), cfg.dim_b, cfg.dim_c];
    let mut state = random_pure_state(dims, &mut r);
    if cfg.state_update == StateUpdate::Choi {
        state = make_choi(&state)?;
    }
    let q = game.num_questions();
    let mut draw = |d: usize| -> Vec<BinaryPovm> {
        (0..q)
            .map(|_| {
                let [e0, e1]: [ComplexMatrix; 2] = random_pvm(d, 2, &mut r).try_into().expect("two outcomes");
                BinaryPovm::from_parts_unchecked(e0.hermitian_part(), e1.hermitian_part())
            })
            .collect()
    };
    let bob = draw(cfg.dim_b);
    let charlie = draw(cfg.dim_c);
    Ok(Strategy { state, bob, charlie })
}

fn run_restart(game: &MoEGame, cfg: &SeesawConfig, restart: usize) -> Result<(Strategy, RestartTrace)> {
    let mut strat = initial_strategy(game, cfg, restart)?;
    let mut values = vec![value(game, &strat)];
    let mut converged = false;
    for _ in 0..cfg.iters {
        let start = *values.last().expect("nonempty");
        update_player(game, &mut strat, true)?;
        values.push(value(game, &strat));
        update_player(game, &mut strat, false)?;
        values.push(value(game, &strat));
        update_state(game, &mut strat, cfg.state_update)?;
        values.push(value(game, &strat));
        if values.last().expect("nonempty") - start < cfg.tol {
            converged = true;
            break;
        }
    }
    let monotone = values.windows(2).all(|w| w[1] >= w[0] - MONOTONE_TOL);
    let final_value = *values.last().expect("nonempty");
    Ok((
        strat,
        RestartTrace {
            restart,
            values,
            converged,
            final_value,
            monotone,
        },
    ))
}

/// Best strategy over `cfg.restarts` independent restarts.
pub fn seesaw_optimize(game: &MoEGame, cfg: &SeesawConfig) -> Result<SeesawResult> {
    if cfg.dim_b == 0 || cfg.dim_c == 0 {
        return Err(Error::Domain("player dimensions must be positive".into()));
    }
    if cfg.restarts == 0 {
        return Err(Error::Domain("at least one restart is required".into()));
    }
    let runs: Vec<(Strategy, RestartTrace)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(game, cfg, r))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, (_, t)) in runs.iter().enumerate() {
        if t.final_value > runs[best].1.final_value {
            best = i;
        }
    }
    let monotone = runs.iter().all(|(_, t)| t.monotone);
    let converged = runs[best].1.converged;
    let value = runs[best].1.final_value;
    let mut traces = Vec::with_capacity(runs.len());
    let mut strategy = None;
    for (i, (s, t)) in runs.into_iter().enumerate() {
        if i == best {
            strategy = Some(s);
        }
        traces.push(t);
    }
    Ok(SeesawResult {
        strategy: strategy.expect("best restart exists"),
        value,
        best_restart: best,
        traces,
        converged,
        monotone,
    })
}

/// See-saw over cloning attacks on `scheme`: the Choi-constrained game
/// optimisation mapped back to a channel and per-key measurements.
pub fn optimize_attack(scheme: &QecmScheme, cfg: &SeesawConfig) -> Result<(CloningAttack, SeesawResult)> {
    let game = MoEGame::from_scheme(scheme)?;
    let mut cfg = cfg.clone();
    cfg.state_update = StateUpdate::Choi;
    let res = seesaw_optimize(&game, &cfg)?;
    let attack = attack_from_strategy(scheme, &game, &res.strategy)?;
    Ok((attack, res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qecm::attack::cloning_success;
    use crate::qecm::game::winning_probability;

    #[test]
    fn bb84_value() {
        let g = MoEGame::bb84();
        let mut cfg = SeesawConfig::new(2, 2, 1);
        cfg.restarts = 8;
        let res = seesaw_optimize(&g, &cfg).unwrap();
        let target = (std::f64::consts::PI / 8.0).cos().powi(2);
        assert!((res.value - target).abs() < 1e-3, "{}", res.value);
        assert!(res.monotone);
        let re = winning_probability(&g, &res.strategy).unwrap();
        assert!((re - res.value).abs() < 1e-12);
    }

    #[test]
    fn single_question_is_won() {
        let p = BinaryPovm::from_projector(ComplexMatrix::basis_projector(2, 0)).unwrap();
        let g = MoEGame::new(vec![p]).unwrap();
        let mut cfg = SeesawConfig::new(2, 2, 3);
        cfg.restarts = 4;
        let res = seesaw_optimize(&g, &cfg).unwrap();
        assert!((res.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn attack_value_matches_cloning_success() {
        let s = QecmScheme::exhaustive(1).unwrap();
        let mut cfg = SeesawConfig::new(2, 2, 7);
        cfg.restarts = 4;
        cfg.iters = 60;
        let (attack, res) = optimize_attack(&s, &cfg).unwrap();
        let est = cloning_success(&s, &attack).unwrap();
        assert!((est.value - res.value).abs() < 1e-9);
        assert!(res.value >= 0.5 - 1e-9 && res.value < 1.0);
        assert!(res.monotone);
    }
}
