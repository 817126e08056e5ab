//! Heuristic calibration by repeated undersampling, kept as an independent
//! validation oracle for the closed-form calibrated metrics.
//!
//! The heuristic resamples the evaluation set until its positive ratio hits
//! the reference prior, computes the plain metric there, and averages over
//! runs. The closed-form calibrated metric should land inside the resulting
//! mean +/- a few standard errors; the oracle makes that claim testable
//! without re-deriving any formula.

use serde::{Deserialize, Serialize};

use crate::calibration::{metric_value, MetricName};
use crate::data::{check_open_unit, LabeledScores};
use crate::error::{Error, Result};
use crate::metrics::empirical_prior;
use crate::par;
use crate::seeding::{derive_seed, rng_from};
use crate::stats::MeanVar;

/// Monte-Carlo estimate of a metric at a target prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub runs: u32,
    pub pi0_target: f64,
    pub achieved_pi: f64,
}

/// How many examples of each class an undersample keeps. The minority side
/// is rounded half up; a plan that would keep zero examples of the reduced
/// class is rejected.
fn undersample_plan(n_pos: usize, n_neg: usize, pi0: f64) -> Result<(usize, usize)> {
    let pi = n_pos as f64 / (n_pos + n_neg) as f64;
    if pi0 > pi {
        let keep_neg = (n_pos as f64 * (1.0 - pi0) / pi0).round() as usize;
        if keep_neg == 0 {
            return Err(Error::UnachievableTarget {
                pi0,
                kept_class: "negative",
            });
        }
        Ok((n_pos, keep_neg.min(n_neg)))
    } else if pi0 < pi {
        let keep_pos = (n_neg as f64 * pi0 / (1.0 - pi0)).round() as usize;
        if keep_pos == 0 {
            return Err(Error::UnachievableTarget {
                pi0,
                kept_class: "positive",
            });
        }
        Ok((keep_pos.min(n_pos), n_neg))
    } else {
        Ok((n_pos, n_neg))
    }
}

/// Uniformly undersample one class so the positive ratio is as close to
/// `pi0` as integer counts allow. Removes negatives when `pi0 > pi` and
/// positives when `pi0 < pi`; returns the data unchanged when no removal is
/// needed. Deterministic given the seed; kept examples preserve their
/// original order.
pub fn undersample_to_prior(data: &LabeledScores, pi0: f64, seed: u64) -> Result<LabeledScores> {
    check_open_unit(pi0, "pi0")?;
    empirical_prior(data)?;
    let n_pos = data.num_positives();
    let n_neg = data.num_negatives();
    let (keep_pos, keep_neg) = undersample_plan(n_pos, n_neg, pi0)?;
    if keep_pos == n_pos && keep_neg == n_neg {
        return Ok(data.clone());
    }

    let (reduced_label, class_count, keep_count) = if keep_neg < n_neg {
        (0u8, n_neg, keep_neg)
    } else {
        (1u8, n_pos, keep_pos)
    };

    let mut rng = rng_from(seed);
    let chosen = rand::seq::index::sample(&mut rng, class_count, keep_count);
    let mut kept_in_class = vec![false; class_count];
    for idx in chosen.iter() {
        kept_in_class[idx] = true;
    }

    let mut labels = Vec::with_capacity(keep_pos + keep_neg);
    let mut scores = Vec::with_capacity(keep_pos + keep_neg);
    let mut class_seen = 0usize;
    for (&y, &s) in data.labels().iter().zip(data.scores()) {
        let keep = if y == reduced_label {
            let k = kept_in_class[class_seen];
            class_seen += 1;
            k
        } else {
            true
        };
        if keep {
            labels.push(y);
            scores.push(s);
        }
    }
    LabeledScores::new(labels, scores)
}

/// Mean and standard deviation of the plain (uncalibrated) metric over
/// `runs` independent undersamples of the data at target prior `pi0`.
///
/// Only the threshold-free uncalibrated metrics are accepted. Runs execute
/// in parallel with per-run seeds derived from `seed`; aggregation folds the
/// per-run values in run order, so the result does not depend on scheduling.
pub fn oracle_estimate(
    data: &LabeledScores,
    pi0: f64,
    metric: MetricName,
    runs: u32,
    seed: u64,
) -> Result<OracleResult> {
    if runs == 0 {
        return Err(Error::InvalidConfig("runs must be at least 1".into()));
    }
    if metric.is_calibrated() || metric.needs_threshold() {
        return Err(Error::InvalidConfig(format!(
            "the undersampling oracle estimates plain threshold-free metrics, not `{metric}`"
        )));
    }
    check_open_unit(pi0, "pi0")?;
    empirical_prior(data)?;
    let (keep_pos, keep_neg) = undersample_plan(data.num_positives(), data.num_negatives(), pi0)?;
    let achieved_pi = keep_pos as f64 / (keep_pos + keep_neg) as f64;

    let values: Result<Vec<f64>> = par::map_indexed(runs as usize, |run| {
        let sub = undersample_to_prior(data, pi0, derive_seed(seed, run as u64))?;
        metric_value(&sub, metric, None)
    })
    .into_iter()
    .collect();
    let acc = MeanVar::from_values(&values?);

    Ok(OracleResult {
        metric: metric.as_str().to_string(),
        mean: acc.mean(),
        std: acc.sample_std(),
        runs,
        pi0_target: pi0,
        achieved_pi,
    })
}

/// The closed-form counterpart the oracle is compared against: the
/// calibrated version of `metric` at `pi0` on the full data (plain AUC-ROC,
/// which calibration does not change, maps to itself).
pub fn closed_form_calibrated(data: &LabeledScores, pi0: f64, metric: MetricName) -> Result<f64> {
    let counterpart = match metric {
        MetricName::AucPr => MetricName::AucPrC,
        MetricName::AucPrGain => MetricName::AucPrGainC,
        MetricName::BestF1 => MetricName::BestF1C,
        MetricName::AucRoc => MetricName::AucRoc,
        other => {
            return Err(Error::InvalidConfig(format!(
                "no calibrated counterpart for `{other}`"
            )))
        }
    };
    let pi0_arg = counterpart.is_calibrated().then_some(pi0);
    metric_value(data, counterpart, pi0_arg)
}
