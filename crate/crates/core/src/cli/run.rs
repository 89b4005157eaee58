//! Subcommand implementations. Each produces its output bytes and one
//! boolean per row-level check; persistence is shared.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::report::{csv_bytes, sidecar_path, write_atomic, RunReport, Summary, SCHEMA_VERSION, TOOL_VERSION};
use super::{
    BoundArgs, CliffordArgs, Command, DecouplingArgs, DecouplingModeArg, DemoArgs, EntropyArgs, EntropyFamily,
    EntropyTask, GameChoice, LemmaArgs, LemmaChoice, SeesawArgs, SeesawTarget,
};
use crate::bound::{precision_bits, verify_theorem1};
use crate::clifford::{clifford_group_order, enumerate_clifford, CliffordElement, UnitaryEnsemble};
use crate::decoupling::{decoupling_verify, lemma1_chain, DecouplingMode};
use crate::entropy::lemmas::{run_lemma, Lemma};
use crate::entropy::minmax::{min_entropy, purified_marginal, recovery_channel, LOOP_CLOSURE_TOL};
use crate::entropy::vn::{conditional_vn, mutual_information, von_neumann};
use crate::error::{Error, Result};
use crate::linalg::io::{read_state, MatrixRecord};
use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::linalg::random::{complex_gaussian, random_density};
use crate::linalg::state::DensityOperator;
use crate::qecm::attack::cloning_success;
use crate::qecm::{
    optimize_attack, seesaw_optimize, CloningAttack, GameKind, MoEGame, QecmScheme, SeesawConfig, StateUpdate,
};
use crate::rng;

/// Everything a subcommand produced.
#[derive(Debug)]
pub struct RunOutput {
    pub summary: Summary,
    pub rows: Vec<Value>,
    /// Files written, main output first.
    pub files: Vec<PathBuf>,
}

struct Produced {
    main: Vec<u8>,
    extra: Vec<(PathBuf, Vec<u8>)>,
    rows: Vec<Value>,
    checks: Vec<bool>,
}

fn rows_json<T: Serialize>(rows: &[T]) -> Result<Vec<Value>> {
    rows.iter().map(|r| Ok(serde_json::to_value(r)?)).collect()
}

fn json_bytes(v: &Value) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Runs `cmd` on its own worker pool and writes its outputs.
pub fn run(cmd: &Command) -> Result<RunOutput> {
    let common = cmd.common();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let started = chrono::Utc::now();
    let produced = pool.install(|| match cmd {
        Command::Clifford(a) => clifford(a),
        Command::Entropy(a) => entropy(a),
        Command::VerifyLemmas(a) => lemmas(a),
        Command::MoeSeesaw(a) => seesaw(a),
        Command::Decoupling(a) => decoupling(a),
        Command::BoundTable(a) => bound_table(a),
        Command::QecmDemo(a) => demo(a),
    })?;
    let finished = chrono::Utc::now();
    let summary = Summary::from_checks(&produced.checks);
    let mut files = vec![common.out.clone()];
    write_atomic(&common.out, &produced.main)?;
    for (p, bytes) in &produced.extra {
        write_atomic(p, bytes)?;
        files.push(p.clone());
    }
    if common.report {
        let report = RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            config: cmd.config(),
            started_at: started.to_rfc3339(),
            finished_at: finished.to_rfc3339(),
            rows: produced.rows.clone(),
            summary: summary.clone(),
        };
        let path = sidecar_path(&common.out, "report.json");
        write_atomic(&path, report.to_json()?.as_bytes())?;
        files.push(path);
    }
    Ok(RunOutput {
        summary,
        rows: produced.rows,
        files,
    })
}

fn random_operator(d: usize, r: &mut rng::LabRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(r))
}

#[derive(Serialize)]
struct DesignCheck {
    check: String,
    index: usize,
    value: f64,
    tolerance: f64,
    pass: bool,
}

fn clifford(a: &CliffordArgs) -> Result<Produced> {
    let n = a.n;
    let (elements, mode) = match a.sample {
        Some(count) => {
            let mut r = rng::stream(a.common.seed, 0);
            let els = (0..count)
                .map(|_| CliffordElement::random(n, &mut r))
                .collect::<Result<Vec<_>>>()?;
            (els, "sample")
        }
        None => (enumerate_clifford(n)?, "enumerate"),
    };
    let mut checks: Vec<DesignCheck> = Vec::new();
    if mode == "enumerate" {
        let expected = clifford_group_order(n as u32) as f64;
        checks.push(DesignCheck {
            check: "group_order".into(),
            index: 0,
            value: elements.len() as f64,
            tolerance: expected,
            pass: elements.len() as f64 == expected,
        });
        let ens = UnitaryEnsemble::new(
            elements
                .iter()
                .map(crate::clifford::clifford_to_unitary)
                .collect::<Result<Vec<_>>>()?,
        )?;
        let d = ens.dim();
        for t in [1usize, 2] {
            for i in 0..a.inputs {
                let mut r = rng::stream(a.common.seed, ((t as u64) << 32) + i as u64);
                let x = random_operator(d.pow(t as u32), &mut r);
                let dev = ens.twirl_deviation(&x, t)?;
                checks.push(DesignCheck {
                    check: format!("twirl_t{t}"),
                    index: i,
                    value: dev,
                    tolerance: a.tol,
                    pass: dev <= a.tol,
                });
            }
        }
    } else {
        for (i, e) in elements.iter().enumerate() {
            checks.push(DesignCheck {
                check: "symplectic".into(),
                index: i,
                value: if e.is_symplectic() { 1.0 } else { 0.0 },
                tolerance: 1.0,
                pass: e.is_symplectic(),
            });
        }
    }
    let records: Vec<_> = elements.iter().map(|e| e.to_record()).collect();
    let doc = json!({
        "schemaVersion": SCHEMA_VERSION,
        "n": n,
        "mode": mode,
        "count": records.len(),
        "checks": checks,
        "tableaux": records,
    });
    Ok(Produced {
        main: json_bytes(&doc)?,
        extra: Vec::new(),
        rows: rows_json(&checks)?,
        checks: checks.iter().map(|c| c.pass).collect(),
    })
}

#[derive(Serialize)]
struct EntropyRow {
    trial: usize,
    family: &'static str,
    dims: String,
    h_min: f64,
    expected: Option<f64>,
    error: Option<f64>,
    gap: f64,
    loop_closure: f64,
    fallback: bool,
    pass: bool,
}

fn classical_correlated(d: usize, r: &mut rng::LabRng) -> Result<DensityOperator> {
    use rand::Rng;
    let w: Vec<f64> = (0..d).map(|_| r.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for (a, wa) in w.iter().enumerate() {
        m[(a * d + a, a * d + a)] = C64::new(wa / s, 0.0);
    }
    DensityOperator::new(m, vec![d, d])
}

fn entropy_trial(a: &EntropyArgs, family: EntropyFamily, trial: usize) -> Result<EntropyRow> {
    let mut r = rng::stream(a.common.seed, trial as u64);
    let (da, db) = (a.dims[0], a.dims[1]);
    let (fam, name) = match family {
        EntropyFamily::ClosedForms => match trial % 5 {
            0..=2 => (EntropyFamily::PhiPlus, "phi-plus"),
            3 => (EntropyFamily::Product, "product"),
            _ => (EntropyFamily::Cq, "cq"),
        },
        EntropyFamily::PhiPlus => (family, "phi-plus"),
        EntropyFamily::Product => (family, "product"),
        EntropyFamily::Cq => (family, "cq"),
        EntropyFamily::Random => (family, "random"),
    };
    let (rho, expected) = match fam {
        EntropyFamily::PhiPlus => {
            let d = if family == EntropyFamily::ClosedForms {
                2 + trial % 5
            } else {
                da
            };
            (DensityOperator::max_entangled(d), Some(-(d as f64).log2()))
        }
        EntropyFamily::Product => {
            let ra = random_density(vec![da], da, &mut r);
            let rb = random_density(vec![db], db, &mut r);
            let lmax = ra.matrix().max_eigenvalue();
            (ra.tensor(&rb).regroup(vec![da, db])?, Some(-lmax.log2()))
        }
        EntropyFamily::Cq => (classical_correlated(da, &mut r)?, Some(0.0)),
        _ => (random_density(vec![da, db], da * db, &mut r), None),
    };
    let (h, sol) = min_entropy(&rho, a.tol)?;
    let rec = recovery_channel(&rho, &sol)?;
    let closure = (rec.achieved - rec.target).abs();
    let error = expected.map(|e| (h - e).abs());
    let pass = sol.gap <= a.tol && closure <= LOOP_CLOSURE_TOL && error.is_none_or(|e| e <= 1e-6);
    Ok(EntropyRow {
        trial,
        family: name,
        dims: rho.dims().iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x"),
        h_min: h,
        expected,
        error,
        gap: sol.gap,
        loop_closure: closure,
        fallback: rec.used_fallback,
        pass,
    })
}

fn entropy(a: &EntropyArgs) -> Result<Produced> {
    if let Some(path) = &a.input {
        return entropy_file(a, path);
    }
    let family = a.family.unwrap_or(EntropyFamily::ClosedForms);
    if a.dims.len() != 2 {
        return Err(Error::DimensionMismatch("--dims takes dA,dB".into()));
    }
    let rows: Vec<EntropyRow> = (0..a.trials)
        .into_par_iter()
        .map(|t| entropy_trial(a, family, t))
        .collect::<Result<_>>()?;
    let header = [
        "trial",
        "family",
        "dims",
        "h_min",
        "expected",
        "error",
        "gap",
        "loop_closure",
        "fallback",
        "pass",
    ];
    Ok(Produced {
        main: csv_bytes(&rows, &header)?,
        extra: Vec::new(),
        rows: rows_json(&rows)?,
        checks: rows.iter().map(|r| r.pass).collect(),
    })
}

fn entropy_file(a: &EntropyArgs, path: &std::path::Path) -> Result<Produced> {
    let mut rho = read_state(path)?;
    if let Some(split) = &a.split {
        rho = rho.regroup(split.clone())?;
    }
    let mut doc = json!({
        "schemaVersion": SCHEMA_VERSION,
        "input": path,
        "dims": rho.dims(),
    });
    let mut checks = Vec::new();
    match a.task {
        EntropyTask::Vn => {
            let v = von_neumann(&rho);
            doc["task"] = json!("vn");
            doc["value"] = json!(v);
            checks.push(v.is_finite());
        }
        EntropyTask::CondVn => {
            let v = conditional_vn(&rho)?;
            doc["task"] = json!("cond-vn");
            doc["value"] = json!(v);
            checks.push(v.is_finite());
        }
        EntropyTask::Mutual => {
            let v = mutual_information(&rho)?;
            doc["task"] = json!("mutual");
            doc["value"] = json!(v);
            checks.push(v.is_finite());
        }
        EntropyTask::Min => {
            let (h, sol) = min_entropy(&rho, a.tol)?;
            let rec = recovery_channel(&rho, &sol)?;
            let closure = (rec.achieved - rec.target).abs();
            doc["task"] = json!("min");
            doc["value"] = json!(h);
            doc["gap"] = json!(sol.gap);
            doc["iterations"] = json!(sol.iterations);
            doc["loopClosure"] = json!(closure);
            doc["recoveryChoi"] = serde_json::to_value(MatrixRecord::from_state(rec.channel.choi()))?;
            checks.push(sol.gap <= a.tol);
            checks.push(closure <= LOOP_CLOSURE_TOL);
        }
        EntropyTask::Max => {
            let ae = purified_marginal(&rho)?;
            let (h, sol) = min_entropy(&ae, a.tol)?;
            doc["task"] = json!("max");
            doc["value"] = json!(-h);
            doc["gap"] = json!(sol.gap);
            doc["iterations"] = json!(sol.iterations);
            checks.push(sol.gap <= a.tol);
        }
    }
    Ok(Produced {
        main: json_bytes(&doc)?,
        extra: Vec::new(),
        rows: vec![doc],
        checks,
    })
}

#[derive(Serialize)]
struct LemmaCsvRow {
    lemma: String,
    trial: usize,
    gap: f64,
    pass: bool,
}

fn lemma1_rows(a: &LemmaArgs) -> Result<Vec<LemmaCsvRow>> {
    let ens = UnitaryEnsemble::clifford(1)?;
    let pvm = [
        ComplexMatrix::basis_projector(2, 0),
        ComplexMatrix::basis_projector(2, 1),
    ];
    let db = a.dims[1];
    (0..a.trials)
        .into_par_iter()
        .map(|t| {
            use rand::Rng;
            let mut r = rng::stream(a.common.seed, (4u64 << 32) + t as u64);
            let k = r.random_range(1..=2 * db);
            let rho = random_density(vec![2, db], k, &mut r);
            let row = lemma1_chain(&rho, &ens, &pvm, t)?;
            let gap = (row.bound - row.guess).min(row.overlap - row.epsilon * row.epsilon);
            Ok(LemmaCsvRow {
                lemma: "lemma1".into(),
                trial: t,
                gap,
                pass: row.pass,
            })
        })
        .collect()
}

fn lemmas(a: &LemmaArgs) -> Result<Produced> {
    if a.dims.len() != 3 {
        return Err(Error::DimensionMismatch("--dims takes dA,dB,dC".into()));
    }
    let dims = (a.dims[0], a.dims[1], a.dims[2]);
    let chosen: Vec<Option<Lemma>> = match a.lemma {
        LemmaChoice::All => Lemma::ALL.iter().copied().map(Some).chain([None]).collect(),
        LemmaChoice::SsaUncertainty => vec![Some(Lemma::SsaUncertainty)],
        LemmaChoice::SsaMinEntropy => vec![Some(Lemma::SsaMinEntropy)],
        LemmaChoice::MinMax => vec![Some(Lemma::MinMax)],
        LemmaChoice::MaxConcavity => vec![Some(Lemma::MaxConcavity)],
        LemmaChoice::Lemma1 => vec![None],
    };
    let mut rows = Vec::new();
    for l in chosen {
        match l {
            Some(l) => rows.extend(
                run_lemma(l, a.trials, dims, a.common.seed, a.tol)?
                    .into_iter()
                    .map(|r| LemmaCsvRow {
                        lemma: r.lemma.name().into(),
                        trial: r.trial,
                        gap: r.gap,
                        pass: r.pass,
                    }),
            ),
            None => {
                if dims.0 != 2 {
                    return Err(Error::Unsupported(
                        "the guess/overlap chain runs on one qubit (dA = 2)".into(),
                    ));
                }
                rows.extend(lemma1_rows(a)?)
            }
        }
    }
    Ok(Produced {
        main: csv_bytes(&rows, &["lemma", "trial", "gap", "pass"])?,
        extra: Vec::new(),
        rows: rows_json(&rows)?,
        checks: rows.iter().map(|r| r.pass).collect(),
    })
}

fn povm_records(p: &[crate::qecm::BinaryPovm]) -> Vec<[MatrixRecord; 2]> {
    p.iter()
        .map(|m| {
            let d = m.dim();
            [
                MatrixRecord::from_matrix(m.element(0), &[d]),
                MatrixRecord::from_matrix(m.element(1), &[d]),
            ]
        })
        .collect()
}

fn seesaw(a: &SeesawArgs) -> Result<Produced> {
    let cfg = SeesawConfig {
        dim_b: a.dim_b,
        dim_c: a.dim_c,
        restarts: a.restarts,
        iters: a.iters,
        tol: a.tol,
        seed: a.common.seed,
        state_update: match a.target {
            SeesawTarget::Game => StateUpdate::Free,
            SeesawTarget::Attack => StateUpdate::Choi,
        },
    };
    let (res, attack_value) = match (a.game, a.target) {
        (GameChoice::Bb84, SeesawTarget::Game) => (seesaw_optimize(&MoEGame::bb84(), &cfg)?, None),
        (GameChoice::Clifford, SeesawTarget::Game) => (
            seesaw_optimize(&MoEGame::build(GameKind::CliffordScheme, a.n)?, &cfg)?,
            None,
        ),
        (GameChoice::Clifford, SeesawTarget::Attack) => {
            let scheme = QecmScheme::exhaustive(a.n)?;
            let (attack, res) = optimize_attack(&scheme, &cfg)?;
            let est = cloning_success(&scheme, &attack)?;
            (res, Some(est.value))
        }
        (GameChoice::Bb84, SeesawTarget::Attack) => {
            return Err(Error::Unsupported(
                "cloning attacks are defined for the Clifford scheme".into(),
            ))
        }
    };
    let state_path = super::report::sidecar_path(&a.common.out, "state.json");
    let state = MatrixRecord::from_state(&res.strategy.state);
    let doc = json!({
        "schemaVersion": SCHEMA_VERSION,
        "game": a.game,
        "n": a.n,
        "target": a.target,
        "value": res.value,
        "cloningSuccess": attack_value,
        "bestRestart": res.best_restart,
        "converged": res.converged,
        "monotone": res.monotone,
        "stateFile": state_path.file_name().map(|f| f.to_string_lossy().into_owned()),
        "bob": povm_records(&res.strategy.bob),
        "charlie": povm_records(&res.strategy.charlie),
        "traces": res.traces,
    });
    let rows: Vec<Value> = res
        .traces
        .iter()
        .map(|t| json!({"restart": t.restart, "finalValue": t.final_value, "converged": t.converged, "monotone": t.monotone}))
        .collect();
    let mut state_bytes = state.to_json()?.into_bytes();
    state_bytes.push(b'\n');
    Ok(Produced {
        main: json_bytes(&doc)?,
        extra: vec![(state_path, state_bytes)],
        rows,
        checks: res.traces.iter().map(|t| t.monotone).collect(),
    })
}

#[derive(Serialize)]
struct DecouplingRow {
    trial: usize,
    lhs: f64,
    stderr: f64,
    rhs: f64,
    margin: f64,
    pass: bool,
}

fn decoupling(a: &DecouplingArgs) -> Result<Produced> {
    let n = a.n;
    let da = 1usize << n;
    let mode = match a.mode {
        DecouplingModeArg::Exact => DecouplingMode::Exact,
        DecouplingModeArg::Mc => DecouplingMode::MonteCarlo,
    };
    let exact = match mode {
        DecouplingMode::Exact => Some(UnitaryEnsemble::clifford(n)?),
        DecouplingMode::MonteCarlo => None,
    };
    let rows: Vec<DecouplingRow> = (0..a.trials)
        .map(|t| {
            let mut r = rng::stream(a.common.seed, t as u64);
            let rho = random_density(vec![da, a.dim_e], da * a.dim_e, &mut r);
            let rep = match &exact {
                Some(ens) => decoupling_verify(&rho, a.m, ens, mode)?,
                None => {
                    let mut ur = rng::stream(a.common.seed, (1u64 << 32) + t as u64);
                    let ens = UnitaryEnsemble::clifford_sampled(n, a.samples, &mut ur)?;
                    decoupling_verify(&rho, a.m, &ens, mode)?
                }
            };
            Ok(DecouplingRow {
                trial: t,
                lhs: rep.lhs,
                stderr: rep.lhs_std_err,
                rhs: rep.rhs,
                margin: rep.margin,
                pass: rep.pass,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Produced {
        main: csv_bytes(&rows, &["trial", "lhs", "stderr", "rhs", "margin", "pass"])?,
        extra: Vec::new(),
        rows: rows_json(&rows)?,
        checks: rows.iter().map(|r| r.pass).collect(),
    })
}

fn bound_table(a: &BoundArgs) -> Result<Produced> {
    let s = verify_theorem1(a.n_min, a.n_max, a.points, precision_bits()?)?;
    let header = [
        "n",
        "m",
        "r",
        "log2_eps0",
        "log2_eps1",
        "delta",
        "log2_gamma",
        "log2_eta",
        "log2_eps_bound",
        "log2_thm1_rhs",
        "log2_margin",
        "pass",
        "log2_two_eta",
        "log2_aep_term",
        "log2_display_t1",
        "log2_display_t2",
        "log2_display_t3",
        "terms_dominated",
        "agreeing_bits",
        "holds",
    ];
    let mut rows = rows_json(&s.rows)?;
    if let Some(last) = rows.last_mut() {
        last["firstHoldingN"] = json!(s.first_holding_n);
        last["holdsFrom"] = json!(s.holds_from);
        last["nontrivialFrom"] = json!(s.nontrivial_from);
        last["monotoneAboveCrossover"] = json!(s.monotone_above_crossover);
    }
    Ok(Produced {
        main: csv_bytes(&s.rows, &header)?,
        extra: Vec::new(),
        rows,
        checks: s.rows.iter().map(|r| r.pass).collect(),
    })
}

#[derive(Serialize)]
struct DemoRow {
    check: &'static str,
    key: usize,
    x: Option<usize>,
    value: f64,
    expected: f64,
    pass: bool,
}

fn demo(a: &DemoArgs) -> Result<Produced> {
    let scheme = QecmScheme::build(a.n, a.samples, a.common.seed)?;
    let mut rows: Vec<DemoRow> = scheme
        .keys()
        .par_iter()
        .enumerate()
        .map(|(i, key)| {
            let mut out = Vec::with_capacity(3);
            let c0 = scheme.encrypt(key, 0)?;
            let c1 = scheme.encrypt(key, 1)?;
            for (x, ct) in [(0usize, &c0), (1, &c1)] {
                let p = scheme.decrypt(key, ct)?;
                let dev = (p[x] - 1.0).abs().max(p[1 - x].abs());
                out.push(DemoRow {
                    check: "round_trip",
                    key: i,
                    x: Some(x),
                    value: p[x],
                    expected: 1.0,
                    pass: dev <= 1e-9,
                });
            }
            let overlap = c0.matrix().trace_product(c1.matrix()).re;
            out.push(DemoRow {
                check: "orthogonality",
                key: i,
                x: None,
                value: overlap,
                expected: 0.0,
                pass: overlap.abs() <= 1e-12,
            });
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for (check, attack, expected) in [
        ("forward_to_bob", CloningAttack::forward_to_bob(&scheme)?, 0.5),
        ("coin_flips", CloningAttack::coin_flips(&scheme), 0.25),
    ] {
        let v = cloning_success(&scheme, &attack)?.value;
        rows.push(DemoRow {
            check,
            key: 0,
            x: None,
            value: v,
            expected,
            pass: (v - expected).abs() <= 1e-9,
        });
    }
    Ok(Produced {
        main: csv_bytes(&rows, &["check", "key", "x", "value", "expected", "pass"])?,
        extra: Vec::new(),
        rows: rows_json(&rows)?,
        checks: rows.iter().map(|r| r.pass).collect(),
    })
}
