//! Validated input containers: labeled score sets, confusion counts and
//! prior configurations.

use crate::error::{Error, Result};

/// Paired ground-truth labels and real-valued classifier scores.
///
/// Labels are strictly `0` or `1` and scores are finite; both sequences have
/// the same non-zero length. Instances are immutable after construction and
/// can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledScores {
    labels: Vec<u8>,
    scores: Vec<f64>,
    n_pos: usize,
}

impl LabeledScores {
    pub fn new(labels: Vec<u8>, scores: Vec<f64>) -> Result<Self> {
        if labels.len() != scores.len() {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: scores.len(),
            });
        }
        if labels.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for (index, &value) in labels.iter().enumerate() {
            if value > 1 {
                return Err(Error::InvalidLabel { index, value });
            }
        }
        for (index, &s) in scores.iter().enumerate() {
            if !s.is_finite() {
                return Err(Error::NonFiniteScore { index });
            }
        }
        let n_pos = labels.iter().filter(|&&l| l == 1).count();
        Ok(Self {
            labels,
            scores,
            n_pos,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn num_positives(&self) -> usize {
        self.n_pos
    }

    pub fn num_negatives(&self) -> usize {
        self.labels.len() - self.n_pos
    }

    /// Raw positive ratio `N+/N`. May be 0 or 1 on one-class data; use
    /// [`crate::metrics::empirical_prior`] when a usable prior is required.
    pub fn positive_ratio(&self) -> f64 {
        self.n_pos as f64 / self.labels.len() as f64
    }

    /// Copy of the dataset with every positive example repeated `factor`
    /// times, the prior-shift transformation used to probe prior invariance:
    /// recall, the false positive rate and all calibrated metrics are
    /// unaffected by it while the empirical prior moves.
    pub fn replicate_positives(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidConfig(
                "replication factor must be at least 1".into(),
            ));
        }
        let extra = self.n_pos * (factor - 1);
        let mut labels = Vec::with_capacity(self.labels.len() + extra);
        let mut scores = Vec::with_capacity(self.labels.len() + extra);
        for (&y, &s) in self.labels.iter().zip(&self.scores) {
            let copies = if y == 1 { factor } else { 1 };
            for _ in 0..copies {
                labels.push(y);
                scores.push(s);
            }
        }
        Self::new(labels, scores)
    }
}

/// Confusion counts at one decision threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
}

impl ConfusionCounts {
    pub fn new(
        true_positives: usize,
        false_positives: usize,
        true_negatives: usize,
        false_negatives: usize,
    ) -> Self {
        Self {
            true_positives,
            false_positives,
            true_negatives,
            false_negatives,
        }
    }

    /// Ground-truth positives: `TP + FN`.
    pub fn positives(&self) -> usize {
        self.true_positives + self.false_negatives
    }

    /// Ground-truth negatives: `FP + TN`.
    pub fn negatives(&self) -> usize {
        self.false_positives + self.true_negatives
    }

    pub fn total(&self) -> usize {
        self.positives() + self.negatives()
    }
}

/// Reference prior `pi0` paired with the empirical prior `pi` of the
/// evaluated set. Both are validated to lie strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorConfig {
    pi0: f64,
    pi: f64,
}

impl PriorConfig {
    pub fn new(pi0: f64, pi: f64) -> Result<Self> {
        check_open_unit(pi0, "pi0")?;
        check_open_unit(pi, "pi")?;
        Ok(Self { pi0, pi })
    }

    /// Reference prior the metrics are calibrated to.
    pub fn pi0(&self) -> f64 {
        self.pi0
    }

    /// Empirical positive ratio of the evaluated set.
    pub fn pi(&self) -> f64 {
        self.pi
    }
}

pub(crate) fn check_open_unit(value: f64, name: &'static str) -> Result<()> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidPrior { name, value })
    }
}
