//! `calmetrics` — evaluate binary-classifier score files with plain and
//! prior-calibrated metrics, emit curves, run the Monte-Carlo oracle and the
//! synthetic robustness experiments.
//!
//! Exit codes: 0 success, 1 I/O, 2 usage, 3 parse, 4 degenerate data,
//! 5 invalid configuration. Data goes to stdout (or `--out`), diagnostics to
//! stderr. Every randomized command takes `--seed` (default 42) and is
//! byte-deterministic for a fixed seed.

mod commands;
mod input;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Io(std::io::Error),
    Parse { line: Option<u64>, message: String },
    Lib(calmetrics::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Parse {
                line: Some(line),
                message,
            } => write!(f, "parse error on line {line}: {message}"),
            CliError::Parse {
                line: None,
                message,
            } => write!(f, "parse error: {message}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<calmetrics::Error> for CliError {
    fn from(e: calmetrics::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use calmetrics::Error as E;
        match self {
            CliError::Io(_) => 1,
            CliError::Parse { .. } => 3,
            CliError::Lib(e) => match e {
                E::EmptyDataset
                | E::DegenerateClasses { .. }
                | E::UnachievableTarget { .. }
                | E::DegenerateDraw { .. } => 4,
                _ => 5,
            },
        }
    }
}

#[derive(Parser)]
#[command(
    name = "calmetrics",
    version,
    about = "Prior-calibrated evaluation of binary-classifier score files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a score file, optionally per group, as JSON or CSV
    Eval(EvalArgs),
    /// Emit a ROC, PR or PR-Gain curve as CSV
    Curve(CurveArgs),
    /// Monte-Carlo undersampling estimate next to the closed-form value
    Oracle(OracleArgs),
    /// Generate a synthetic two-Gaussian score file
    Synth(SynthArgs),
    /// Robustness-to-prior experiment over a grid of class ratios
    PriorSweep(PriorSweepArgs),
    /// Difficulty experiment over a KL grid with random priors
    DifficultySweep(DifficultySweepArgs),
    /// Spearman correlation matrix of metrics over model pools
    Rankcorr(RankcorrArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Score file (`label,score[,group]`)
    file: PathBuf,
    /// Reference prior for the calibrated metrics
    #[arg(long)]
    pi0: Option<f64>,
    /// Comma-separated metric names (default: all plain metrics, plus the
    /// calibrated ones when --pi0 is given)
    #[arg(long, value_delimiter = ',')]
    metrics: Option<Vec<String>>,
    /// Decision threshold for precision/recall/F1
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    /// One report per group id (requires a `group` column); pi is computed
    /// per group while pi0 is shared
    #[arg(long)]
    by_group: bool,
    /// JSON output (the default)
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// CSV output, one row per report
    #[arg(long)]
    csv: bool,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveKindArg {
    Roc,
    Pr,
    Prgain,
}

#[derive(Args)]
struct CurveArgs {
    /// Score file (`label,score[,group]`; groups are ignored)
    file: PathBuf,
    /// Which curve to compute
    #[arg(long, value_enum)]
    kind: CurveKindArg,
    /// Reference prior: calibrates PR / PR-Gain (not valid for ROC)
    #[arg(long)]
    pi0: Option<f64>,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Score file
    file: PathBuf,
    /// Target prior the test set is undersampled to
    #[arg(long)]
    pi0: f64,
    /// Plain threshold-free metric to estimate
    #[arg(long, default_value = "auc_pr")]
    metric: String,
    #[arg(long, default_value_t = 1000)]
    runs: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    /// Positive class ratio (Bernoulli parameter)
    #[arg(long, default_value_t = 0.5)]
    pi: f64,
    #[arg(long, default_value_t = 2.0)]
    mu1: f64,
    #[arg(long, default_value_t = 1.8)]
    mu0: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PriorSweepArgs {
    /// Class-ratio grid
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.2, 0.05, 0.01, 0.001])]
    grid: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    runs: u32,
    #[arg(long, default_value_t = 0.5)]
    pi0: f64,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// JSON instead of CSV
    #[arg(long)]
    json: bool,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DifficultySweepArgs {
    /// KL-divergence grid
    #[arg(long = "kl-grid", value_delimiter = ',', default_values_t = [0.08, 0.04, 0.02, 0.01, 0.005, 0.0])]
    kl_grid: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    runs: u32,
    #[arg(long, default_value_t = 0.5)]
    pi0: f64,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// JSON instead of CSV
    #[arg(long)]
    json: bool,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RankcorrArgs {
    /// Pool CSV files (`label,<model>,<model>,...`); when omitted, synthetic
    /// pools are generated from the options below
    files: Vec<PathBuf>,
    /// Number of synthetic pools
    #[arg(long, default_value_t = 20)]
    pools: usize,
    /// Models per synthetic pool
    #[arg(long, default_value_t = 30)]
    models: usize,
    #[arg(long, default_value_t = 4_000)]
    n: usize,
    /// Positive class ratio of the synthetic pools
    #[arg(long, default_value_t = 0.1)]
    pi: f64,
    #[arg(long, default_value_t = 2.0)]
    mu1: f64,
    #[arg(long, default_value_t = 1.8)]
    mu0: f64,
    /// Largest per-model score-noise standard deviation in a pool
    #[arg(long, default_value_t = 1.2)]
    noise_max: f64,
    /// Absolute reference prior used by one calibrated column set
    #[arg(long = "pi0-absolute", default_value_t = 0.5)]
    pi0_absolute: f64,
    /// Multiple of the pool prior used by the other calibrated column set
    #[arg(long = "pi0-multiple", default_value_t = 1.01)]
    pi0_multiple: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => commands::eval(args),
        Command::Curve(args) => commands::curve(args),
        Command::Oracle(args) => commands::oracle(args),
        Command::Synth(args) => commands::synth(args),
        Command::PriorSweep(args) => commands::prior_sweep(args),
        Command::DifficultySweep(args) => commands::difficulty_sweep(args),
        Command::Rankcorr(args) => commands::rankcorr(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
