//! Two-Gaussian synthetic benchmark and the robustness experiment drivers.
//!
//! Labels are Bernoulli(`pi`); the feature is unit-variance Gaussian with a
//! class-conditional mean (`mu1` for positives, `mu0` for negatives). The
//! optimal scorer for this family is the likelihood ratio, kept in log form.
//! Problem difficulty is controlled by the KL divergence between the class
//! conditionals, which for unit variance is `(mu1 - mu0)^2 / 2`.

use std::fmt::Write as _;

use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{Bernoulli, Normal};
use serde::{Deserialize, Serialize};

use crate::calibration::{evaluate, EvalConfig, MetricName};
use crate::data::{check_open_unit, LabeledScores};
use crate::error::{Error, Result};
use crate::par;
use crate::seeding::{derive_seed, rng_from};
use crate::stats::MeanVar;

/// Parameters of one synthetic draw. Variance is fixed at 1 by construction
/// and is not a parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub mu1: f64,
    pub mu0: f64,
    pub pi: f64,
    pub n: usize,
    pub seed: u64,
}

/// Class-conditional means used throughout the robustness experiments.
pub const DEFAULT_MU1: f64 = 2.0;
pub const DEFAULT_MU0: f64 = 1.8;

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        check_open_unit(self.pi, "pi")?;
        if !self.mu1.is_finite() || !self.mu0.is_finite() {
            return Err(Error::InvalidConfig("class means must be finite".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidConfig("n must be at least 2".into()));
        }
        Ok(())
    }
}

/// A generated sample: binary labels and the raw feature.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub labels: Vec<u8>,
    pub features: Vec<f64>,
}

/// Draw `n` i.i.d. points: label from Bernoulli(pi), feature from the
/// class-conditional Gaussian. Deterministic given the spec's seed.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let mut rng = rng_from(spec.seed);
    let label_dist = Bernoulli::new(spec.pi).expect("pi validated to lie in (0, 1)");
    let pos = Normal::new(spec.mu1, 1.0).expect("unit-variance normal");
    let neg = Normal::new(spec.mu0, 1.0).expect("unit-variance normal");
    let mut labels = Vec::with_capacity(spec.n);
    let mut features = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let y = label_dist.sample(&mut rng);
        let x = if y {
            pos.sample(&mut rng)
        } else {
            neg.sample(&mut rng)
        };
        labels.push(u8::from(y));
        features.push(x);
    }
    Ok(SyntheticData { labels, features })
}

/// Log-likelihood ratio of the two class conditionals at `x`:
/// `x * (mu1 - mu0) + (mu0^2 - mu1^2) / 2`.
///
/// Any strictly increasing transform scores identically under rank-based
/// metrics; the log form is the canonical output.
pub fn optimal_score(x: f64, spec: &SyntheticSpec) -> f64 {
    x * (spec.mu1 - spec.mu0) + (spec.mu0 * spec.mu0 - spec.mu1 * spec.mu1) / 2.0
}

/// Score a generated sample with the optimal scorer.
pub fn optimal_scores(data: &SyntheticData, spec: &SyntheticSpec) -> Result<LabeledScores> {
    let scores = data
        .features
        .iter()
        .map(|&x| optimal_score(x, spec))
        .collect();
    LabeledScores::new(data.labels.clone(), scores)
}

/// KL divergence between the class conditionals: `(mu1 - mu0)^2 / 2`.
pub fn kl_divergence(spec: &SyntheticSpec) -> f64 {
    let d = spec.mu1 - spec.mu0;
    0.5 * d * d
}

/// One aggregated measurement of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub sweep_value: f64,
    pub metric: String,
    pub mean: f64,
    pub ci_half_width: f64,
}

/// Tabular result of a sweep experiment: one row per (sweep value, metric),
/// in grid-then-metric order, plus the parameters held fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTable {
    /// What the sweep value means: `"pi"` or `"kl"`.
    pub sweep: String,
    pub runs: u32,
    pub pi0: f64,
    pub n: usize,
    pub seed: u64,
    pub mu0: f64,
    /// Fixed positive-class mean; absent for the difficulty sweep where it
    /// is derived from the KL value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu1: Option<f64>,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentTable {
    /// Rows for one sweep value, in metric order.
    pub fn rows_for(&self, sweep_value: f64) -> Vec<&ExperimentRow> {
        self.rows
            .iter()
            .filter(|r| r.sweep_value == sweep_value)
            .collect()
    }

    /// The (mean, ci) series of one metric along the sweep grid.
    pub fn series(&self, metric: &str) -> Vec<(f64, f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.metric == metric)
            .map(|r| (r.sweep_value, r.mean, r.ci_half_width))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# sweep: {}", self.sweep).unwrap();
        writeln!(out, "# runs: {}", self.runs).unwrap();
        writeln!(out, "# pi0: {}", self.pi0).unwrap();
        writeln!(out, "# n: {}", self.n).unwrap();
        writeln!(out, "# seed: {}", self.seed).unwrap();
        writeln!(out, "# mu0: {}", self.mu0).unwrap();
        if let Some(mu1) = self.mu1 {
            writeln!(out, "# mu1: {mu1}").unwrap();
        }
        out.push_str("sweep_value,metric,mean,ci\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                r.sweep_value, r.metric, r.mean, r.ci_half_width
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialization cannot fail")
    }
}

/// Metrics tracked by both sweep experiments.
pub const SWEEP_METRICS: [MetricName; 6] = [
    MetricName::AucPr,
    MetricName::AucPrGain,
    MetricName::BestF1,
    MetricName::AucPrC,
    MetricName::AucPrGainC,
    MetricName::BestF1C,
];

fn scored_draw_with_retry(spec: &SyntheticSpec) -> Result<LabeledScores> {
    let data = generate(spec)?;
    let has_both = data.labels.contains(&1) && data.labels.contains(&0);
    if has_both {
        return optimal_scores(&data, spec);
    }
    // One resample with a derived seed; silent retry loops would bias the
    // statistics, so a second failure is a hard error.
    let retry = SyntheticSpec {
        seed: derive_seed(spec.seed, u64::MAX),
        ..*spec
    };
    let data = generate(&retry)?;
    let has_both = data.labels.contains(&1) && data.labels.contains(&0);
    if has_both {
        optimal_scores(&data, &retry)
    } else {
        Err(Error::DegenerateDraw {
            pi: spec.pi,
            n: spec.n,
        })
    }
}

fn eval_cell(data: &LabeledScores, pi0: f64) -> Result<Vec<f64>> {
    let cfg = EvalConfig::with_pi0(pi0).metrics(SWEEP_METRICS);
    let report = evaluate(data, &cfg, None)?;
    Ok(SWEEP_METRICS
        .iter()
        .map(|m| report.values[m.as_str()])
        .collect())
}

/// Fill the rows of a table shell from per-cell metric values laid out in
/// grid-then-run order.
fn aggregate(
    mut table: ExperimentTable,
    grid: &[f64],
    per_cell: Vec<Result<Vec<f64>>>,
) -> Result<ExperimentTable> {
    let per_cell: Vec<Vec<f64>> = per_cell.into_iter().collect::<Result<_>>()?;
    let runs = table.runs as usize;
    table.rows.reserve(grid.len() * SWEEP_METRICS.len());
    for (gi, &sweep_value) in grid.iter().enumerate() {
        let mut accs = vec![MeanVar::default(); SWEEP_METRICS.len()];
        for run in 0..runs {
            let values = &per_cell[gi * runs + run];
            for (acc, &v) in accs.iter_mut().zip(values) {
                acc.push(v);
            }
        }
        for (metric, acc) in SWEEP_METRICS.iter().zip(&accs) {
            table.rows.push(ExperimentRow {
                sweep_value,
                metric: metric.as_str().to_string(),
                mean: acc.mean(),
                ci_half_width: acc.ci_half_width(),
            });
        }
    }
    Ok(table)
}

/// Robustness-to-prior experiment: for each `pi` in the grid, draw `runs`
/// datasets with the default class means, score with the optimal scorer and
/// aggregate the tracked metrics (calibrated ones at `pi0`).
///
/// Each (grid point, run) cell is an independent task with a seed derived
/// from `seed`; cells run in parallel and aggregate in grid-then-run order.
pub fn prior_sweep(
    pi_grid: &[f64],
    runs: u32,
    pi0: f64,
    n: usize,
    seed: u64,
) -> Result<ExperimentTable> {
    if pi_grid.is_empty() || runs == 0 {
        return Err(Error::InvalidConfig(
            "prior sweep needs a non-empty grid and at least one run".into(),
        ));
    }
    for &pi in pi_grid {
        check_open_unit(pi, "pi")?;
    }
    check_open_unit(pi0, "pi0")?;

    let cells = pi_grid.len() * runs as usize;
    let per_cell = par::map_indexed(cells, |cell| {
        let gi = cell / runs as usize;
        let spec = SyntheticSpec {
            mu1: DEFAULT_MU1,
            mu0: DEFAULT_MU0,
            pi: pi_grid[gi],
            n,
            seed: derive_seed(seed, cell as u64),
        };
        let data = scored_draw_with_retry(&spec)?;
        eval_cell(&data, pi0)
    });
    let shell = ExperimentTable {
        sweep: "pi".to_string(),
        runs,
        pi0,
        n,
        seed,
        mu0: DEFAULT_MU0,
        mu1: Some(DEFAULT_MU1),
        rows: Vec::new(),
    };
    aggregate(shell, pi_grid, per_cell)
}

/// Difficulty experiment: for each KL value, set the mean gap to
/// `sqrt(2 * KL)` (with `mu0` fixed) and draw `runs` datasets whose prior is
/// itself uniform on [0.001, 0.5] per run, so prior noise and difficulty
/// vary together the way the calibrated metrics are meant to disentangle.
pub fn difficulty_sweep(
    kl_grid: &[f64],
    runs: u32,
    pi0: f64,
    n: usize,
    seed: u64,
) -> Result<ExperimentTable> {
    if kl_grid.is_empty() || runs == 0 {
        return Err(Error::InvalidConfig(
            "difficulty sweep needs a non-empty grid and at least one run".into(),
        ));
    }
    for &kl in kl_grid {
        if !kl.is_finite() || kl < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "KL values must be non-negative, got {kl}"
            )));
        }
    }
    check_open_unit(pi0, "pi0")?;

    let cells = kl_grid.len() * runs as usize;
    let per_cell = par::map_indexed(cells, |cell| {
        let gi = cell / runs as usize;
        let cell_seed = derive_seed(seed, cell as u64);
        let pi = rng_from(cell_seed).random_range(0.001..=0.5);
        let spec = SyntheticSpec {
            mu1: DEFAULT_MU0 + (2.0 * kl_grid[gi]).sqrt(),
            mu0: DEFAULT_MU0,
            pi,
            n,
            seed: derive_seed(cell_seed, 1),
        };
        let data = scored_draw_with_retry(&spec)?;
        eval_cell(&data, pi0)
    });
    let shell = ExperimentTable {
        sweep: "kl".to_string(),
        runs,
        pi0,
        n,
        seed,
        mu0: DEFAULT_MU0,
        mu1: None,
        rows: Vec::new(),
    };
    aggregate(shell, kl_grid, per_cell)
}
