//! Command-line front end: argument parsing, dispatch, and persistence.

pub mod report;
pub mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use report::{emit_summary, ExperimentConfig, RunReport, Summary};
pub use run::{run, RunOutput};

/// Exit status for failed row-level checks.
pub const EXIT_CHECKS_FAILED: u8 = 1;
/// Exit status for usage errors.
pub const EXIT_USAGE: u8 = 2;
/// Exit status for module or I/O errors.
pub const EXIT_ERROR: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "uncloneable-lab",
    version,
    about = "Numerical laboratory for single-bit Clifford uncloneable encryption"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CommonArgs {
    /// Master seed; every random stream derives from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (CSV, or JSON where noted).
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Suppress the summary line and warnings.
    #[arg(long)]
    pub quiet: bool,
    /// Also write a JSON run report next to the output.
    #[arg(long)]
    pub report: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyFamily {
    /// Cycle through the closed-form families.
    ClosedForms,
    PhiPlus,
    Product,
    Cq,
    /// Random mixed states (loop closure only).
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaChoice {
    All,
    SsaUncertainty,
    SsaMinEntropy,
    MinMax,
    MaxConcavity,
    Lemma1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameChoice {
    Bb84,
    Clifford,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeesawTarget {
    /// Unconstrained shared state.
    Game,
    /// Cloning attacks: the state is a channel's Choi state.
    Attack,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecouplingModeArg {
    Exact,
    Mc,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CliffordArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Enumerate the whole group (the default; n <= 2).
    #[arg(long, conflicts_with = "sample")]
    pub enumerate: bool,
    /// Sample this many uniformly random elements instead.
    #[arg(long)]
    pub sample: Option<usize>,
    /// Random operators per moment in the 2-design check.
    #[arg(long, default_value_t = 50)]
    pub inputs: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyTask {
    Vn,
    CondVn,
    Mutual,
    Min,
    Max,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct EntropyArgs {
    /// State file `{"dims":[..],"re":[..],"im":[..]}`; output is JSON.
    #[arg(long = "in", conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EntropyTask::Min)]
    pub task: EntropyTask,
    /// Bipartite regrouping `dA,dB` of the input state.
    #[arg(long, value_delimiter = ',')]
    pub split: Option<Vec<usize>>,
    /// Generated test suite instead of a file; output is CSV.
    #[arg(long, value_enum)]
    pub family: Option<EntropyFamily>,
    /// Dimensions `dA,dB` of generated states.
    #[arg(long, value_delimiter = ',', default_value = "2,2")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub common: CommonArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct LemmaArgs {
    #[arg(long, value_enum, default_value_t = LemmaChoice::All)]
    pub lemma: LemmaChoice,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Dimensions `dA,dB,dC` (bipartite lemmas use the first two).
    #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub common: CommonArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SeesawArgs {
    #[arg(long, value_enum, default_value_t = GameChoice::Bb84)]
    pub game: GameChoice,
    /// Qubits of the Clifford game.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = SeesawTarget::Game)]
    pub target: SeesawTarget,
    #[arg(long, default_value_t = 2)]
    pub dim_b: usize,
    #[arg(long, default_value_t = 2)]
    pub dim_c: usize,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub common: CommonArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DecouplingArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = DecouplingModeArg::Exact)]
    pub mode: DecouplingModeArg,
    /// Sampled unitaries in Monte-Carlo mode.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Dimension of the environment E.
    #[arg(long, default_value_t = 2)]
    pub dim_e: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub common: CommonArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 20_000)]
    pub n_min: u64,
    #[arg(long, default_value_t = 100_000_000)]
    pub n_max: u64,
    #[arg(long, default_value_t = 64)]
    pub points: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub common: CommonArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Sampled keys when `n` exceeds the enumerable range.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clifford group order and 2-design certification.
    #[command(args_override_self = true)]
    Clifford(CliffordArgs),
    /// Min/max-entropy SDP with closed-form checks and loop closure.
    #[command(args_override_self = true)]
    Entropy(EntropyArgs),
    /// Entropic inequalities on random states.
    #[command(args_override_self = true)]
    VerifyLemmas(LemmaArgs),
    /// See-saw lower bounds on game or cloning values.
    #[command(args_override_self = true)]
    MoeSeesaw(SeesawArgs),
    /// One-shot decoupling bound on random states.
    #[command(args_override_self = true)]
    Decoupling(DecouplingArgs),
    /// High-precision bound chain on a log grid.
    #[command(args_override_self = true)]
    BoundTable(BoundArgs),
    /// Encrypt/decrypt round trip and trivial attacks.
    #[command(args_override_self = true)]
    QecmDemo(DemoArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Clifford(_) => "clifford",
            Command::Entropy(_) => "entropy",
            Command::VerifyLemmas(_) => "verify-lemmas",
            Command::MoeSeesaw(_) => "moe-seesaw",
            Command::Decoupling(_) => "decoupling",
            Command::BoundTable(_) => "bound-table",
            Command::QecmDemo(_) => "qecm-demo",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Clifford(a) => &a.common,
            Command::Entropy(a) => &a.common,
            Command::VerifyLemmas(a) => &a.common,
            Command::MoeSeesaw(a) => &a.common,
            Command::Decoupling(a) => &a.common,
            Command::BoundTable(a) => &a.common,
            Command::QecmDemo(a) => &a.common,
        }
    }

    fn parameters(&self) -> serde_json::Map<String, serde_json::Value> {
        let v = match self {
            Command::Clifford(a) => serde_json::to_value(a),
            Command::Entropy(a) => serde_json::to_value(a),
            Command::VerifyLemmas(a) => serde_json::to_value(a),
            Command::MoeSeesaw(a) => serde_json::to_value(a),
            Command::Decoupling(a) => serde_json::to_value(a),
            Command::BoundTable(a) => serde_json::to_value(a),
            Command::QecmDemo(a) => serde_json::to_value(a),
        };
        match v {
            Ok(serde_json::Value::Object(m)) => m,
            _ => serde_json::Map::new(),
        }
    }

    pub fn config(&self) -> ExperimentConfig {
        let c = self.common();
        ExperimentConfig {
            subcommand: self.name().to_string(),
            parameters: self.parameters(),
            seed: c.seed,
            output_path: c.out.clone(),
        }
    }
}

/// A parsed command line with warnings about repeated flags.
#[derive(Debug)]
pub struct Invocation {
    pub cli: Cli,
    pub warnings: Vec<String>,
}

fn repeated_flags(argv: &[String]) -> Vec<String> {
    let mut seen: Vec<(String, usize)> = Vec::new();
    for a in argv.iter().skip(1) {
        if a == "--" {
            break;
        }
        if let Some(flag) = a.strip_prefix("--") {
            let name = flag.split('=').next().unwrap_or(flag).to_string();
            match seen.iter_mut().find(|(n, _)| *n == name) {
                Some(e) => e.1 += 1,
                None => seen.push((name, 1)),
            }
        }
    }
    seen.into_iter()
        .filter(|(_, k)| *k > 1)
        .map(|(n, k)| format!("warning: --{n} given {k} times; the last value wins"))
        .collect()
}

/// Parses `argv` (program name first); the last occurrence of a repeated
/// flag wins and is reported as a warning.
pub fn parse_invocation<I, T>(argv: I) -> std::result::Result<Invocation, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv)?;
    Ok(Invocation {
        cli,
        warnings: repeated_flags(&argv),
    })
}

fn error_record(e: &crate::Error) -> String {
    let kind = format!("{e:?}");
    let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
    serde_json::json!({ "error": kind, "message": e.to_string() }).to_string()
}

/// Full command-line entry point.
pub fn main_with_args(argv: Vec<String>) -> ExitCode {
    let inv = match parse_invocation(argv) {
        Ok(i) => i,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let quiet = inv.cli.command.common().quiet;
    if !quiet {
        for w in &inv.warnings {
            eprintln!("{w}");
        }
    }
    match run(&inv.cli.command) {
        Ok(out) => {
            if !quiet {
                if out.summary.total == 0 {
                    eprintln!("warning: no checks executed");
                }
                println!("{}", emit_summary(&out.summary));
            }
            if out.summary.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECKS_FAILED)
            }
        }
        Err(e) => {
            eprintln!("{}", error_record(&e));
            ExitCode::from(EXIT_ERROR)
        }
    }
}
