//! Prior-calibrated precision and the composite metrics built on it.
//!
//! Calibrated precision reweighs the false-positive count by
//! `w = pi * (1 - pi0) / (pi0 * (1 - pi))`, the factor by which the
//! negative-to-positive ratio would change if the positive class ratio were
//! `pi0` instead of the empirical `pi`:
//!
//! ```text
//! Prec_c = TP / (TP + w * FP)
//! ```
//!
//! Because `(pi / (1 - pi)) * FP / TP = FPR / TPR`, calibrated precision is a
//! function of the class-conditional rates and `pi0` alone, which makes every
//! metric derived from it invariant to prior shifts in the evaluated set.
//! `pi` is always the empirical prior of the evaluated (sub)set; `pi0` is
//! always chosen by the caller.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curves::{pr_from_sweep, prgain_from_sweep, roc_from_sweep, sweep_data, SweepData};
use crate::data::{ConfusionCounts, LabeledScores, PriorConfig};
use crate::error::{Error, Result};
use crate::metrics::{confusion_at_threshold, empirical_prior, f1_score, precision, recall};
use crate::par;
use crate::report::MetricReport;

/// The reweighting factor `pi * (1 - pi0) / (pi0 * (1 - pi))`.
///
/// Equal to 1 exactly when `pi == pi0`, making every calibrated metric
/// collapse onto its plain counterpart.
pub fn calibration_weight(cfg: &PriorConfig) -> f64 {
    cfg.pi() * (1.0 - cfg.pi0()) / (cfg.pi0() * (1.0 - cfg.pi()))
}

/// Calibrated precision `TP / (TP + w * FP)`, or `None` when nothing is
/// predicted positive.
pub fn calibrated_precision(c: &ConfusionCounts, cfg: &PriorConfig) -> Option<f64> {
    if c.true_positives == 0 && c.false_positives == 0 {
        return None;
    }
    let w = calibration_weight(cfg);
    let tp = c.true_positives as f64;
    Some(tp / (tp + w * c.false_positives as f64))
}

/// Calibrated precision through the rate identity
/// `1 / (1 + ((1 - pi0) / pi0) * FPR / TPR)`.
///
/// Defined when TPR > 0 and both classes are present; agrees with the count
/// form to machine precision and makes the prior-independence explicit.
pub fn calibrated_precision_rate_form(c: &ConfusionCounts, cfg: &PriorConfig) -> Option<f64> {
    let positives = c.positives();
    let negatives = c.negatives();
    if positives == 0 || negatives == 0 || c.true_positives == 0 {
        return None;
    }
    let tpr = c.true_positives as f64 / positives as f64;
    let fpr = c.false_positives as f64 / negatives as f64;
    Some(1.0 / (1.0 + ((1.0 - cfg.pi0()) / cfg.pi0()) * (fpr / tpr)))
}

/// F1 with precision replaced by calibrated precision.
pub fn calibrated_f1(c: &ConfusionCounts, cfg: &PriorConfig) -> Result<f64> {
    let rec = recall(c)?;
    let prec_c = calibrated_precision(c, cfg).ok_or(Error::Undefined {
        quantity: "calibrated precision",
        reason: "no positive predictions",
    })?;
    Ok(f1_score(prec_c, rec))
}

/// Calibrated precision gain and recall gain, the gain formulas with
/// `(Prec_c, pi0)` in place of `(Prec, pi)`.
///
/// The calibrated precision gain rewrites algebraically to the plain
/// precision gain, so the first component is computed through that shared
/// form and matches `precision_gain(precision(c), pi)` exactly.
pub fn calibrated_gains(c: &ConfusionCounts, cfg: &PriorConfig) -> Result<(f64, f64)> {
    let prec = precision(c).ok_or(Error::Undefined {
        quantity: "precision gain",
        reason: "no positive predictions",
    })?;
    let rec = recall(c)?;
    let prec_gain = crate::metrics::precision_gain(prec, cfg.pi())?;
    let rec_gain = crate::metrics::recall_gain(rec, cfg.pi0())?;
    Ok((prec_gain, rec_gain))
}

/// Best F1 over the sweep thresholds together with the distinct score value
/// that attains it (predict positive when the score is >= the threshold).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestF1 {
    pub value: f64,
    pub threshold: f64,
}

pub(crate) fn best_f1_from_sweep(sweep: &SweepData, prior: Option<&PriorConfig>) -> BestF1 {
    let mut best = BestF1 {
        value: -1.0,
        threshold: f64::NAN,
    };
    for (c, &threshold) in sweep.counts[1..].iter().zip(&sweep.thresholds) {
        let p = match prior {
            None => precision(c),
            Some(cfg) => calibrated_precision(c, cfg),
        }
        .expect("sweep points after the all-negative state have TP + FP >= 1");
        let r = c.true_positives as f64 / sweep.n_pos as f64;
        let f = f1_score(p, r);
        if f > best.value {
            best = BestF1 {
                value: f,
                threshold,
            };
        }
    }
    best
}

/// Maximum F1 over all distinct-score thresholds.
pub fn best_f1(data: &LabeledScores) -> Result<BestF1> {
    Ok(best_f1_from_sweep(&sweep_data(data)?, None))
}

/// Maximum calibrated F1 over all distinct-score thresholds. The threshold
/// maximizes the calibrated F1 itself, not the plain F1.
pub fn best_f1_calibrated(data: &LabeledScores, cfg: &PriorConfig) -> Result<BestF1> {
    let sweep = sweep_data(data)?;
    let empirical = sweep.pi();
    if (cfg.pi() - empirical).abs() > 1e-12 {
        return Err(Error::PriorMismatch {
            config_pi: cfg.pi(),
            empirical,
        });
    }
    Ok(best_f1_from_sweep(&sweep, Some(cfg)))
}

/// Names of the metrics a [`MetricReport`] can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    Precision,
    Recall,
    F1,
    BestF1,
    AucRoc,
    AucPr,
    AucPrGain,
    PrecisionC,
    F1C,
    BestF1C,
    AucPrC,
    AucPrGainC,
}

impl MetricName {
    pub const ALL: [MetricName; 12] = [
        MetricName::Precision,
        MetricName::Recall,
        MetricName::F1,
        MetricName::BestF1,
        MetricName::AucRoc,
        MetricName::AucPr,
        MetricName::AucPrGain,
        MetricName::PrecisionC,
        MetricName::F1C,
        MetricName::BestF1C,
        MetricName::AucPrC,
        MetricName::AucPrGainC,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MetricName::Precision => "precision",
            MetricName::Recall => "recall",
            MetricName::F1 => "f1",
            MetricName::BestF1 => "best_f1",
            MetricName::AucRoc => "auc_roc",
            MetricName::AucPr => "auc_pr",
            MetricName::AucPrGain => "auc_pr_gain",
            MetricName::PrecisionC => "precision_c",
            MetricName::F1C => "f1_c",
            MetricName::BestF1C => "best_f1_c",
            MetricName::AucPrC => "auc_pr_c",
            MetricName::AucPrGainC => "auc_pr_gain_c",
        }
    }

    /// True for the variants that need a reference prior.
    pub fn is_calibrated(&self) -> bool {
        matches!(
            self,
            MetricName::PrecisionC
                | MetricName::F1C
                | MetricName::BestF1C
                | MetricName::AucPrC
                | MetricName::AucPrGainC
        )
    }

    /// True for the single-threshold metrics that need a decision threshold.
    pub fn needs_threshold(&self) -> bool {
        matches!(
            self,
            MetricName::Precision
                | MetricName::Recall
                | MetricName::F1
                | MetricName::PrecisionC
                | MetricName::F1C
        )
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricName::ALL
            .iter()
            .find(|m| m.as_str() == s)
            .copied()
            .ok_or_else(|| Error::UnknownMetric(s.to_string()))
    }
}

/// The threshold-free metric set without calibration.
pub fn uncalibrated_metrics() -> BTreeSet<MetricName> {
    [
        MetricName::Precision,
        MetricName::Recall,
        MetricName::F1,
        MetricName::BestF1,
        MetricName::AucRoc,
        MetricName::AucPr,
        MetricName::AucPrGain,
    ]
    .into_iter()
    .collect()
}

/// Every metric, calibrated variants included.
pub fn all_metrics() -> BTreeSet<MetricName> {
    MetricName::ALL.into_iter().collect()
}

/// What to compute in [`evaluate`].
///
/// `tau` is the decision threshold used by the single-threshold metrics
/// (precision, recall, F1 and their calibrated forms); curve areas and best
/// F1 ignore it. `pi0` must be given whenever a calibrated metric is
/// requested; there is deliberately no default reference prior.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub pi0: Option<f64>,
    pub tau: f64,
    pub metrics: BTreeSet<MetricName>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            pi0: None,
            tau: 0.5,
            metrics: uncalibrated_metrics(),
        }
    }
}

impl EvalConfig {
    /// All metrics, calibrated ones referred to `pi0`.
    pub fn with_pi0(pi0: f64) -> Self {
        Self {
            pi0: Some(pi0),
            tau: 0.5,
            metrics: all_metrics(),
        }
    }

    pub fn metrics(mut self, metrics: impl IntoIterator<Item = MetricName>) -> Self {
        self.metrics = metrics.into_iter().collect();
        self
    }

    pub fn tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }
}

/// Evaluate the requested metrics on one dataset (or one group of a grouped
/// evaluation, carried as `group`).
pub fn evaluate(
    data: &LabeledScores,
    cfg: &EvalConfig,
    group: Option<&str>,
) -> Result<MetricReport> {
    if cfg.metrics.is_empty() {
        return Err(Error::InvalidConfig("no metrics requested".into()));
    }
    let wants_calibrated = cfg.metrics.iter().any(MetricName::is_calibrated);
    let prior = if wants_calibrated {
        let pi0 = cfg.pi0.ok_or_else(|| {
            Error::InvalidConfig("calibrated metrics require a reference prior pi0".into())
        })?;
        Some(PriorConfig::new(pi0, empirical_prior(data)?)?)
    } else {
        None
    };

    let needs_sweep = cfg.metrics.iter().any(|m| !m.needs_threshold());
    let sweep = if needs_sweep {
        Some(sweep_data(data)?)
    } else {
        None
    };
    let needs_conf = cfg.metrics.iter().any(MetricName::needs_threshold);
    let conf = needs_conf.then(|| confusion_at_threshold(data, cfg.tau));

    let mut report = MetricReport {
        group: group.map(str::to_string),
        n: data.len(),
        n_pos: data.num_positives(),
        pi: data.positive_ratio(),
        pi0: prior.as_ref().map(|p| p.pi0()),
        values: Default::default(),
        best_f1_threshold: None,
        best_f1_c_threshold: None,
        clamped: Vec::new(),
    };

    for &metric in &cfg.metrics {
        let value = match metric {
            MetricName::Precision => precision(conf.as_ref().unwrap()).ok_or(Error::Undefined {
                quantity: "precision",
                reason: "no score exceeds the decision threshold",
            })?,
            MetricName::Recall => recall(conf.as_ref().unwrap())?,
            MetricName::F1 => {
                let c = conf.as_ref().unwrap();
                if c.true_positives == 0 {
                    0.0
                } else {
                    f1_score(precision(c).unwrap(), recall(c)?)
                }
            }
            MetricName::PrecisionC => {
                calibrated_precision(conf.as_ref().unwrap(), prior.as_ref().unwrap()).ok_or(
                    Error::Undefined {
                        quantity: "calibrated precision",
                        reason: "no score exceeds the decision threshold",
                    },
                )?
            }
            MetricName::F1C => {
                let c = conf.as_ref().unwrap();
                if c.true_positives == 0 {
                    0.0
                } else {
                    calibrated_f1(c, prior.as_ref().unwrap())?
                }
            }
            MetricName::BestF1 => {
                let b = best_f1_from_sweep(sweep.as_ref().unwrap(), None);
                report.best_f1_threshold = Some(b.threshold);
                b.value
            }
            MetricName::BestF1C => {
                let b = best_f1_from_sweep(sweep.as_ref().unwrap(), prior.as_ref());
                report.best_f1_c_threshold = Some(b.threshold);
                b.value
            }
            MetricName::AucRoc => roc_from_sweep(sweep.as_ref().unwrap()).auc,
            MetricName::AucPr => pr_from_sweep(sweep.as_ref().unwrap(), None)?.auc,
            MetricName::AucPrC => pr_from_sweep(sweep.as_ref().unwrap(), prior.as_ref())?.auc,
            MetricName::AucPrGain => {
                let curve = prgain_from_sweep(sweep.as_ref().unwrap(), None)?;
                if curve.auc_clamped {
                    report.clamped.push(metric.as_str().to_string());
                }
                curve.auc
            }
            MetricName::AucPrGainC => {
                let curve = prgain_from_sweep(sweep.as_ref().unwrap(), prior.as_ref())?;
                if curve.auc_clamped {
                    report.clamped.push(metric.as_str().to_string());
                }
                curve.auc
            }
        };
        report.values.insert(metric.as_str().to_string(), value);
    }
    Ok(report)
}

/// Evaluate several (group id, data) pairs with a shared configuration.
/// Groups run in parallel; the output preserves the input order.
pub fn evaluate_groups(
    groups: &[(String, LabeledScores)],
    cfg: &EvalConfig,
) -> Result<Vec<MetricReport>> {
    par::map_indexed(groups.len(), |i| {
        evaluate(&groups[i].1, cfg, Some(&groups[i].0))
    })
    .into_iter()
    .collect()
}

/// Single threshold-free metric value; the workhorse of the Monte-Carlo
/// oracle and the model-pool analyses.
pub fn metric_value(data: &LabeledScores, metric: MetricName, pi0: Option<f64>) -> Result<f64> {
    if metric.needs_threshold() {
        return Err(Error::InvalidConfig(format!(
            "metric `{metric}` needs a decision threshold; use evaluate()"
        )));
    }
    let sweep = sweep_data(data)?;
    let prior = if metric.is_calibrated() {
        let pi0 =
            pi0.ok_or_else(|| Error::InvalidConfig(format!("metric `{metric}` requires pi0")))?;
        Some(PriorConfig::new(pi0, sweep.pi())?)
    } else {
        None
    };
    Ok(match metric {
        MetricName::AucRoc => roc_from_sweep(&sweep).auc,
        MetricName::AucPr => pr_from_sweep(&sweep, None)?.auc,
        MetricName::AucPrC => pr_from_sweep(&sweep, prior.as_ref())?.auc,
        MetricName::AucPrGain => prgain_from_sweep(&sweep, None)?.auc,
        MetricName::AucPrGainC => prgain_from_sweep(&sweep, prior.as_ref())?.auc,
        MetricName::BestF1 => best_f1_from_sweep(&sweep, None).value,
        MetricName::BestF1C => best_f1_from_sweep(&sweep, prior.as_ref()).value,
        _ => unreachable!("threshold metrics rejected above"),
    })
}
