//! Prior-calibrated evaluation metrics for binary classifiers.
//!
//! Precision-based metrics (precision, F1, AUC-PR, AUC-PR-Gain) depend on the
//! positive class ratio of the evaluated set, which makes them hard to compare
//! across subpopulations or time periods whose ratio differs. This crate
//! computes them alongside *calibrated* variants that reweigh false positives
//! to a caller-chosen reference ratio `pi0`, reporting the value each metric
//! would take if the positive ratio were `pi0`. Calibrated metrics depend on
//! the class-conditional rates only, so they are invariant to prior shifts.
//!
//! The crate also ships the machinery to validate that behavior end to end:
//! threshold-sweep ROC / PR / PR-Gain curves, a Monte-Carlo undersampling
//! oracle that estimates the same quantities by resampling, a two-Gaussian
//! synthetic benchmark with robustness experiment drivers, and Spearman
//! rank-correlation analysis of how metrics order pools of models.
//!
//! ```
//! use calmetrics::{evaluate, EvalConfig, LabeledScores};
//!
//! let data = LabeledScores::new(vec![1, 0, 1, 0], vec![0.9, 0.8, 0.4, 0.2]).unwrap();
//! let report = evaluate(&data, &EvalConfig::with_pi0(0.5), None).unwrap();
//! assert!((report.values["auc_roc"] - 0.75).abs() < 1e-12);
//! // pi == pi0 here, so calibration changes nothing.
//! assert_eq!(report.values["auc_pr_c"], report.values["auc_pr"]);
//! ```
//!
//! With the default `parallel` feature, Monte-Carlo runs, experiment grid
//! cells, groups and model pools fan out over rayon; disable default features
//! for a fully sequential build. Results are identical either way.

pub mod calibration;
pub mod curves;
pub mod data;
pub mod error;
pub mod metrics;
pub mod oracle;
pub mod rank;
pub mod report;
pub mod stats;
pub mod synthetic;

mod par;
mod seeding;

pub use calibration::{
    all_metrics, best_f1, best_f1_calibrated, calibrated_f1, calibrated_gains,
    calibrated_precision, calibrated_precision_rate_form, calibration_weight, evaluate,
    evaluate_groups, metric_value, uncalibrated_metrics, BestF1, EvalConfig, MetricName,
};
pub use curves::{pr_curve, prgain_curve, roc_curve, sweep, Curve, CurveKind};
pub use data::{ConfusionCounts, LabeledScores, PriorConfig};
pub use error::{Error, Result};
pub use metrics::{
    confusion_at_threshold, empirical_prior, f1_score, false_positive_rate, precision,
    precision_gain, recall, recall_gain,
};
pub use oracle::{closed_form_calibrated, oracle_estimate, undersample_to_prior, OracleResult};
pub use rank::{
    correlation_matrix, metric_vector, spearman, synth_model_pool, CorrelationMatrix, ModelPool,
    Pi0Rule, RankMetric,
};
pub use report::{reports_to_csv, MetricReport};
pub use synthetic::{
    difficulty_sweep, generate, kl_divergence, optimal_score, optimal_scores, prior_sweep,
    ExperimentRow, ExperimentTable, SyntheticData, SyntheticSpec,
};
