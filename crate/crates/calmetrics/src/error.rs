//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence length mismatch ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("label at index {index} is {value}; labels must be 0 or 1")]
    InvalidLabel { index: usize, value: u8 },

    #[error("score at index {index} is not finite")]
    NonFiniteScore { index: usize },

    #[error("degenerate class split: {positives} positives, {negatives} negatives")]
    DegenerateClasses { positives: usize, negatives: usize },

    #[error("{name} must lie strictly inside (0, 1), got {value}")]
    InvalidPrior { name: &'static str, value: f64 },

    #[error("prior config carries pi={config_pi} but the data has empirical prior {empirical}")]
    PriorMismatch { config_pi: f64, empirical: f64 },

    #[error("{quantity} is undefined: {reason}")]
    Undefined {
        quantity: &'static str,
        reason: &'static str,
    },

    #[error("unknown metric name `{0}`")]
    UnknownMetric(String),

    #[error(
        "undersampling to pi0={pi0} is unachievable: it would keep zero {kept_class} examples"
    )]
    UnachievableTarget { pi0: f64, kept_class: &'static str },

    #[error("synthetic draw produced a one-class sample twice in a row (pi={pi}, n={n})")]
    DegenerateDraw { pi: f64, n: usize },

    #[error("rank correlation is undefined for a constant vector")]
    ConstantVector,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("serialization failed: {0}")]
    Serialization(String),
}
