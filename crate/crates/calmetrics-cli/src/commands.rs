//! Subcommand implementations. Each builds one output payload and hands it
//! to [`emit`], so stdout and `--out` carry identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use calmetrics::{
    all_metrics, closed_form_calibrated, correlation_matrix,
    difficulty_sweep as run_difficulty_sweep, empirical_prior, evaluate, evaluate_groups, generate,
    optimal_scores, oracle_estimate, pr_curve, prgain_curve, prior_sweep as run_prior_sweep,
    reports_to_csv, roc_curve, synth_model_pool, uncalibrated_metrics, EvalConfig, MetricName,
    ModelPool, OracleResult, PriorConfig, RankMetric, SyntheticSpec,
};

use crate::input::{group_split, read_score_file, to_labeled};
use crate::{
    CliError, CurveArgs, CurveKindArg, DifficultySweepArgs, EvalArgs, OracleArgs, PriorSweepArgs,
    RankcorrArgs, SynthArgs,
};

fn emit(payload: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, payload).map_err(CliError::Io),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn parse_metric(name: &str) -> Result<MetricName, CliError> {
    name.parse::<MetricName>().map_err(CliError::Lib)
}

pub fn eval(args: EvalArgs) -> Result<(), CliError> {
    let records = read_score_file(&args.file)?;
    let metrics: BTreeSet<MetricName> = match &args.metrics {
        Some(names) => names
            .iter()
            .map(|n| parse_metric(n))
            .collect::<Result<_, _>>()?,
        None if args.pi0.is_some() => all_metrics(),
        None => uncalibrated_metrics(),
    };
    let cfg = EvalConfig {
        pi0: args.pi0,
        tau: args.tau,
        metrics,
    };

    let reports = if args.by_group {
        evaluate_groups(&group_split(&records)?, &cfg)?
    } else {
        vec![evaluate(&to_labeled(&records)?, &cfg, None)?]
    };

    let payload = if args.csv {
        reports_to_csv(&reports)?
    } else if args.by_group {
        let mut json =
            serde_json::to_string_pretty(&reports).expect("report serialization cannot fail");
        json.push('\n');
        json
    } else {
        let mut json = reports[0].to_json();
        json.push('\n');
        json
    };
    emit(&payload, args.out.as_deref())
}

pub fn curve(args: CurveArgs) -> Result<(), CliError> {
    let records = read_score_file(&args.file)?;
    let data = to_labeled(&records)?;
    let prior = match args.pi0 {
        Some(pi0) => Some(PriorConfig::new(pi0, empirical_prior(&data)?)?),
        None => None,
    };
    let curve = match args.kind {
        CurveKindArg::Roc => {
            if prior.is_some() {
                return Err(CliError::Lib(calmetrics::Error::InvalidConfig(
                    "ROC is prior-invariant and has no calibrated form; drop --pi0".into(),
                )));
            }
            roc_curve(&data)?
        }
        CurveKindArg::Pr => pr_curve(&data, prior.as_ref())?,
        CurveKindArg::Prgain => prgain_curve(&data, prior.as_ref())?,
    };
    emit(&curve.to_csv(), args.out.as_deref())
}

#[derive(Serialize)]
struct OracleOutput {
    #[serde(flatten)]
    oracle: OracleResult,
    /// Closed-form calibrated value on the full data, for direct comparison.
    closed_form: f64,
}

pub fn oracle(args: OracleArgs) -> Result<(), CliError> {
    let records = read_score_file(&args.file)?;
    let data = to_labeled(&records)?;
    let metric = parse_metric(&args.metric)?;
    let oracle = oracle_estimate(&data, args.pi0, metric, args.runs, args.seed)?;
    let closed_form = closed_form_calibrated(&data, args.pi0, metric)?;
    let output = OracleOutput {
        oracle,
        closed_form,
    };
    let mut json = serde_json::to_string_pretty(&output).expect("oracle serialization cannot fail");
    json.push('\n');
    emit(&json, args.out.as_deref())
}

pub fn synth(args: SynthArgs) -> Result<(), CliError> {
    let spec = SyntheticSpec {
        mu1: args.mu1,
        mu0: args.mu0,
        pi: args.pi,
        n: args.n,
        seed: args.seed,
    };
    let data = optimal_scores(&generate(&spec)?, &spec)?;
    let mut payload = String::from("label,score\n");
    for (&label, &score) in data.labels().iter().zip(data.scores()) {
        writeln!(payload, "{label},{score}").unwrap();
    }
    emit(&payload, args.out.as_deref())
}

pub fn prior_sweep(args: PriorSweepArgs) -> Result<(), CliError> {
    let table = run_prior_sweep(&args.grid, args.runs, args.pi0, args.n, args.seed)?;
    let payload = if args.json {
        let mut json = table.to_json();
        json.push('\n');
        json
    } else {
        table.to_csv()
    };
    emit(&payload, args.out.as_deref())
}

pub fn difficulty_sweep(args: DifficultySweepArgs) -> Result<(), CliError> {
    let table = run_difficulty_sweep(&args.kl_grid, args.runs, args.pi0, args.n, args.seed)?;
    let payload = if args.json {
        let mut json = table.to_json();
        json.push('\n');
        json
    } else {
        table.to_csv()
    };
    emit(&payload, args.out.as_deref())
}

fn linspace(max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.0];
    }
    (0..count)
        .map(|i| max * i as f64 / (count - 1) as f64)
        .collect()
}

pub fn rankcorr(args: RankcorrArgs) -> Result<(), CliError> {
    let pools: Vec<ModelPool> = if args.files.is_empty() {
        (0..args.pools)
            .map(|p| {
                let spec = SyntheticSpec {
                    mu1: args.mu1,
                    mu0: args.mu0,
                    pi: args.pi,
                    n: args.n,
                    seed: args.seed.wrapping_add(p as u64),
                };
                let noise = linspace(args.noise_max, args.models);
                synth_model_pool(
                    &spec,
                    args.models,
                    &noise,
                    args.seed.wrapping_add(10_000 + p as u64),
                )
                .map_err(CliError::Lib)
            })
            .collect::<Result<_, _>>()?
    } else {
        args.files
            .iter()
            .map(|path| {
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                let file = std::fs::File::open(path).map_err(CliError::Io)?;
                ModelPool::from_csv_reader(file, id).map_err(CliError::Lib)
            })
            .collect::<Result<_, _>>()?
    };
    let columns = RankMetric::standard_set(args.pi0_absolute, args.pi0_multiple);
    let matrix = correlation_matrix(&pools, &columns)?;
    emit(&matrix.to_csv(), args.out.as_deref())
}
