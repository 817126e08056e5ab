//! Threshold sweeps and the ROC / PR / PR-Gain curves built from them.
//!
//! The sweep visits one threshold per distinct score value, descending, so
//! tied scores always collapse into a single point and results do not depend
//! on input order. Area conventions:
//!
//! * ROC: trapezoidal rule (linear interpolation is valid in ROC space);
//! * PR: right-step summation `sum((R_i - R_{i-1}) * P_i)`, the
//!   average-precision form, because linear interpolation between PR points
//!   is not meaningful;
//! * PR-Gain: trapezoidal rule over the unit gain square, restricted to
//!   sweep points with non-negative recall gain.

use std::fmt;
use std::fmt::Write as _;

use crate::calibration::calibrated_precision;
use crate::data::{ConfusionCounts, LabeledScores, PriorConfig};
use crate::error::{Error, Result};
use crate::metrics::{precision, precision_gain, recall_gain};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Roc,
    Pr,
    PrGain,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveKind::Roc => "roc",
            CurveKind::Pr => "pr",
            CurveKind::PrGain => "prgain",
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An ordered curve with its area.
///
/// `auc` is clamped to `[0, 1]`; `auc_clamped` records whether clamping
/// actually changed the value (possible for PR-Gain only, whose raw area is
/// unbounded below).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub kind: CurveKind,
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
    pub auc_clamped: bool,
}

impl Curve {
    /// CSV rendering: `x,y` rows preceded by `#` header comments carrying the
    /// kind and area, ready for external plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# kind: {}", self.kind).unwrap();
        writeln!(out, "# auc: {}", self.auc).unwrap();
        writeln!(out, "# auc_clamped: {}", self.auc_clamped).unwrap();
        out.push_str("x,y\n");
        for &(x, y) in &self.points {
            writeln!(out, "{x},{y}").unwrap();
        }
        out
    }
}

/// One confusion-count state per sweep threshold, plus the distinct score
/// values that generated them. `counts[0]` is the all-negative state and has
/// no threshold; `counts[i + 1]` corresponds to `thresholds[i]` (predicted
/// positive means score >= that value under the strict `>` rule).
#[derive(Debug, Clone)]
pub(crate) struct SweepData {
    pub counts: Vec<ConfusionCounts>,
    pub thresholds: Vec<f64>,
    pub n_pos: usize,
    pub n_neg: usize,
}

impl SweepData {
    pub fn pi(&self) -> f64 {
        self.n_pos as f64 / (self.n_pos + self.n_neg) as f64
    }
}

pub(crate) fn sweep_data(data: &LabeledScores) -> Result<SweepData> {
    let n_pos = data.num_positives();
    let n_neg = data.num_negatives();
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::DegenerateClasses {
            positives: n_pos,
            negatives: n_neg,
        });
    }

    let mut order: Vec<(f64, u8)> = data
        .scores()
        .iter()
        .copied()
        .zip(data.labels().iter().copied())
        .collect();
    par::sort_unstable_by(&mut order, |a, b| b.0.total_cmp(&a.0));

    let mut counts = Vec::with_capacity(order.len() + 1);
    let mut thresholds = Vec::with_capacity(order.len());
    counts.push(ConfusionCounts::new(0, 0, n_neg, n_pos));

    let mut tp = 0usize;
    let mut fp = 0usize;
    for (k, &(score, label)) in order.iter().enumerate() {
        if label == 1 {
            tp += 1;
        } else {
            fp += 1;
        }
        let group_ends = k + 1 == order.len() || order[k + 1].0 != score;
        if group_ends {
            counts.push(ConfusionCounts::new(tp, fp, n_neg - fp, n_pos - tp));
            thresholds.push(score);
        }
    }

    Ok(SweepData {
        counts,
        thresholds,
        n_pos,
        n_neg,
    })
}

/// Confusion counts at every distinct-score threshold, descending, preceded
/// by the all-negative state.
pub fn sweep(data: &LabeledScores) -> Result<Vec<ConfusionCounts>> {
    Ok(sweep_data(data)?.counts)
}

fn trapezoid_area(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) * 0.5)
        .sum()
}

fn step_area(points: &[(f64, f64)]) -> f64 {
    points.windows(2).map(|w| (w[1].0 - w[0].0) * w[1].1).sum()
}

fn check_prior_matches(cfg: &PriorConfig, sweep: &SweepData) -> Result<()> {
    let empirical = sweep.pi();
    if (cfg.pi() - empirical).abs() > 1e-12 {
        return Err(Error::PriorMismatch {
            config_pi: cfg.pi(),
            empirical,
        });
    }
    Ok(())
}

pub(crate) fn roc_from_sweep(sweep: &SweepData) -> Curve {
    let points: Vec<(f64, f64)> = sweep
        .counts
        .iter()
        .map(|c| {
            (
                c.false_positives as f64 / sweep.n_neg as f64,
                c.true_positives as f64 / sweep.n_pos as f64,
            )
        })
        .collect();
    let auc = trapezoid_area(&points);
    Curve {
        kind: CurveKind::Roc,
        points,
        auc,
        auc_clamped: false,
    }
}

pub(crate) fn pr_from_sweep(sweep: &SweepData, prior: Option<&PriorConfig>) -> Result<Curve> {
    if let Some(cfg) = prior {
        check_prior_matches(cfg, sweep)?;
    }
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(sweep.counts.len());
    for c in &sweep.counts[1..] {
        let r = c.true_positives as f64 / sweep.n_pos as f64;
        // Every real sweep point predicts at least one instance positive, so
        // precision is defined here; only the skipped all-negative state has
        // the undefined 0/0 form.
        let p = match prior {
            None => precision(c),
            Some(cfg) => calibrated_precision(c, cfg),
        }
        .expect("sweep points after the all-negative state have TP + FP >= 1");
        points.push((r, p));
    }
    // Anchor at recall 0 with the precision of the highest-score point; it
    // carries no area under step integration.
    let first_p = points[0].1;
    points.insert(0, (0.0, first_p));
    let auc = step_area(&points);
    Ok(Curve {
        kind: CurveKind::Pr,
        points,
        auc,
        auc_clamped: false,
    })
}

pub(crate) fn prgain_from_sweep(sweep: &SweepData, prior: Option<&PriorConfig>) -> Result<Curve> {
    let pi = sweep.pi();
    let pi_ref = match prior {
        None => pi,
        Some(cfg) => {
            check_prior_matches(cfg, sweep)?;
            cfg.pi0()
        }
    };
    let mut points: Vec<(f64, f64)> = Vec::new();
    for c in &sweep.counts[1..] {
        let r = c.true_positives as f64 / sweep.n_pos as f64;
        // Keep the region with non-negative recall gain; recall >= pi_ref > 0
        // also guarantees TP >= 1, so both gains are defined.
        if r < pi_ref {
            continue;
        }
        let x = recall_gain(r, pi_ref)?;
        let p = precision(c).expect("TP >= 1 implies a defined precision");
        // The calibrated precision gain rewrites exactly to the plain
        // precision gain, so the y coordinate is shared by both variants.
        let y = precision_gain(p, pi)?;
        points.push((x, y));
    }
    let raw = if points.len() >= 2 {
        trapezoid_area(&points)
    } else {
        0.0
    };
    let auc = raw.clamp(0.0, 1.0);
    Ok(Curve {
        kind: CurveKind::PrGain,
        points,
        auc,
        auc_clamped: auc != raw,
    })
}

/// ROC curve: true positive rate against false positive rate, trapezoidal
/// area. Runs from (0, 0) to (1, 1).
pub fn roc_curve(data: &LabeledScores) -> Result<Curve> {
    Ok(roc_from_sweep(&sweep_data(data)?))
}

/// PR curve: precision (calibrated when a prior config is given) against
/// recall, average-precision area.
///
/// When `prior` is given its `pi` must match the empirical prior of `data`.
pub fn pr_curve(data: &LabeledScores, prior: Option<&PriorConfig>) -> Result<Curve> {
    pr_from_sweep(&sweep_data(data)?, prior)
}

/// PR-Gain curve: precision gain against recall gain over the unit gain
/// square, trapezoidal area. With a prior config the gains are referred to
/// `pi0` instead of the empirical prior.
pub fn prgain_curve(data: &LabeledScores, prior: Option<&PriorConfig>) -> Result<Curve> {
    prgain_from_sweep(&sweep_data(data)?, prior)
}
