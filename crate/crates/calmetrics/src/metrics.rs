//! Pointwise metrics: confusion counts at a threshold and the ratios built
//! from them.
//!
//! Thresholding is strict: an instance is predicted positive when its score
//! is strictly greater than the threshold, so ties at the threshold are all
//! classified negative.

use crate::data::{check_open_unit, ConfusionCounts, LabeledScores};
use crate::error::{Error, Result};

/// Empirical positive class ratio `N+/N`.
///
/// Errors when either class is empty, since a degenerate prior cannot be
/// used for calibration or curve construction.
pub fn empirical_prior(data: &LabeledScores) -> Result<f64> {
    if data.num_positives() == 0 || data.num_negatives() == 0 {
        return Err(Error::DegenerateClasses {
            positives: data.num_positives(),
            negatives: data.num_negatives(),
        });
    }
    Ok(data.positive_ratio())
}

/// Confusion counts with predicted-positive defined as `score > tau`.
pub fn confusion_at_threshold(data: &LabeledScores, tau: f64) -> ConfusionCounts {
    let mut c = ConfusionCounts::new(0, 0, 0, 0);
    for (&y, &s) in data.labels().iter().zip(data.scores()) {
        match (s > tau, y == 1) {
            (true, true) => c.true_positives += 1,
            (true, false) => c.false_positives += 1,
            (false, true) => c.false_negatives += 1,
            (false, false) => c.true_negatives += 1,
        }
    }
    c
}

/// `TP / (TP + FP)`, or `None` when nothing is predicted positive.
pub fn precision(c: &ConfusionCounts) -> Option<f64> {
    let predicted = c.true_positives + c.false_positives;
    if predicted == 0 {
        return None;
    }
    Some(c.true_positives as f64 / predicted as f64)
}

/// `TP / (TP + FN)`; errors when the data has no positives.
pub fn recall(c: &ConfusionCounts) -> Result<f64> {
    let positives = c.positives();
    if positives == 0 {
        return Err(Error::DegenerateClasses {
            positives: 0,
            negatives: c.negatives(),
        });
    }
    Ok(c.true_positives as f64 / positives as f64)
}

/// `FP / (FP + TN)`; errors when the data has no negatives.
pub fn false_positive_rate(c: &ConfusionCounts) -> Result<f64> {
    let negatives = c.negatives();
    if negatives == 0 {
        return Err(Error::DegenerateClasses {
            positives: c.positives(),
            negatives: 0,
        });
    }
    Ok(c.false_positives as f64 / negatives as f64)
}

/// Harmonic mean of precision and recall, with the usual convention that it
/// is 0 when both inputs are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&precision));
    debug_assert!((0.0..=1.0).contains(&recall));
    if precision + recall == 0.0 {
        return 0.0;
    }
    2.0 * precision * recall / (precision + recall)
}

/// Precision gain `(prec - pi) / ((1 - pi) * prec)`.
///
/// Maps the always-positive baseline (precision = pi) to 0 and perfect
/// precision to 1; negative below the baseline.
pub fn precision_gain(precision: f64, pi: f64) -> Result<f64> {
    check_open_unit(pi, "pi")?;
    if precision <= 0.0 {
        return Err(Error::Undefined {
            quantity: "precision gain",
            reason: "precision is zero",
        });
    }
    Ok((precision - pi) / ((1.0 - pi) * precision))
}

/// Recall gain `(rec - pi) / ((1 - pi) * rec)`.
pub fn recall_gain(recall: f64, pi: f64) -> Result<f64> {
    check_open_unit(pi, "pi")?;
    if recall <= 0.0 {
        return Err(Error::Undefined {
            quantity: "recall gain",
            reason: "recall is zero",
        });
    }
    Ok((recall - pi) / ((1.0 - pi) * recall))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::LabeledScores;
    use proptest::prelude::*;

    fn counts(tp: usize, fp: usize, tn: usize, fn_: usize) -> ConfusionCounts {
        ConfusionCounts::new(tp, fp, tn, fn_)
    }

    #[test]
    fn empirical_prior_examples() {
        let half = LabeledScores::new(vec![1, 0, 1, 0], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(empirical_prior(&half).unwrap(), 0.5);

        let tenth = LabeledScores::new(vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0], vec![0.0; 10]).unwrap();
        assert_eq!(empirical_prior(&tenth).unwrap(), 0.1);

        let degenerate = LabeledScores::new(vec![1, 1, 1], vec![0.1, 0.2, 0.3]).unwrap();
        assert!(matches!(
            empirical_prior(&degenerate),
            Err(Error::DegenerateClasses { .. })
        ));
    }

    #[test]
    fn confusion_at_threshold_examples() {
        let data = LabeledScores::new(vec![1, 0, 1, 0], vec![0.9, 0.8, 0.4, 0.2]).unwrap();
        assert_eq!(confusion_at_threshold(&data, 0.5), counts(1, 1, 1, 1));
        // Above every score: everything predicted negative.
        assert_eq!(
            confusion_at_threshold(&data, f64::INFINITY),
            counts(0, 0, 2, 2)
        );
        // Below every score: everything predicted positive.
        assert_eq!(confusion_at_threshold(&data, 0.1), counts(2, 2, 0, 0));
    }

    #[test]
    fn threshold_is_strict() {
        let data = LabeledScores::new(vec![1, 0], vec![0.5, 0.4]).unwrap();
        // The tie at 0.5 is classified negative.
        assert_eq!(confusion_at_threshold(&data, 0.5), counts(0, 0, 1, 1));
    }

    #[test]
    fn precision_examples() {
        assert_eq!(precision(&counts(1, 1, 0, 0)), Some(0.5));
        assert_eq!(precision(&counts(0, 5, 0, 0)), Some(0.0));
        assert_eq!(precision(&counts(0, 0, 3, 2)), None);
    }

    #[test]
    fn recall_examples() {
        assert_eq!(recall(&counts(1, 0, 0, 1)).unwrap(), 0.5);
        assert_eq!(recall(&counts(3, 0, 0, 0)).unwrap(), 1.0);
        assert_eq!(recall(&counts(1, 0, 0, 3)).unwrap(), 0.25);
        assert!(recall(&counts(0, 2, 3, 0)).is_err());
    }

    #[test]
    fn fpr_examples() {
        assert_eq!(false_positive_rate(&counts(0, 1, 1, 0)).unwrap(), 0.5);
        assert_eq!(false_positive_rate(&counts(0, 0, 9, 1)).unwrap(), 0.0);
        assert_eq!(false_positive_rate(&counts(0, 3, 1, 0)).unwrap(), 0.75);
        assert!(false_positive_rate(&counts(2, 0, 0, 1)).is_err());
    }

    #[test]
    fn f1_examples() {
        assert_eq!(f1_score(0.7, 0.7), 0.7);
        assert!((f1_score(1.0, 0.5) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(f1_score(0.0, 0.0), 0.0);
    }

    #[test]
    fn gain_examples() {
        assert_eq!(precision_gain(0.25, 0.25).unwrap(), 0.0);
        assert_eq!(precision_gain(1.0, 0.3).unwrap(), 1.0);
        assert!((precision_gain(0.5, 0.25).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(precision_gain(0.0, 0.25).is_err());

        assert_eq!(recall_gain(0.2, 0.2).unwrap(), 0.0);
        assert_eq!(recall_gain(1.0, 0.2).unwrap(), 1.0);
        assert!((recall_gain(0.5, 0.2).unwrap() - 0.75).abs() < 1e-15);
        assert!(recall_gain(0.0, 0.2).is_err());
    }

    #[test]
    fn replication_leaves_recall_and_fpr_unchanged() {
        let data = LabeledScores::new(vec![1, 0, 1, 0, 1], vec![0.9, 0.8, 0.6, 0.4, 0.2]).unwrap();
        let tripled = data.replicate_positives(3).unwrap();
        for tau in [0.1, 0.3, 0.5, 0.7, 0.95] {
            let a = confusion_at_threshold(&data, tau);
            let b = confusion_at_threshold(&tripled, tau);
            assert_eq!(recall(&a).unwrap(), recall(&b).unwrap());
            assert_eq!(
                false_positive_rate(&a).unwrap(),
                false_positive_rate(&b).unwrap()
            );
        }
    }

    proptest! {
        #[test]
        fn partition_property(
            labels in proptest::collection::vec(0u8..=1, 1..200),
            tau in -2.0f64..2.0,
            seed in any::<u64>(),
        ) {
            // Pseudo-random but reproducible scores derived from the seed.
            let scores: Vec<f64> = (0..labels.len())
                .map(|i| {
                    let z = seed.wrapping_add(i as u64).wrapping_mul(0x9E3779B97F4A7C15);
                    (z >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
                })
                .collect();
            let data = LabeledScores::new(labels, scores).unwrap();
            let c = confusion_at_threshold(&data, tau);
            prop_assert_eq!(c.positives(), data.num_positives());
            prop_assert_eq!(c.negatives(), data.num_negatives());
        }

        #[test]
        fn confusion_monotone_in_threshold(
            labels in proptest::collection::vec(0u8..=1, 1..100),
            lo in -1.0f64..1.0,
            delta in 0.0f64..1.0,
            seed in any::<u64>(),
        ) {
            let scores: Vec<f64> = (0..labels.len())
                .map(|i| {
                    let z = seed.wrapping_add(i as u64).wrapping_mul(0x9E3779B97F4A7C15);
                    (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
                })
                .collect();
            let data = LabeledScores::new(labels, scores).unwrap();
            let low = confusion_at_threshold(&data, lo);
            let high = confusion_at_threshold(&data, lo + delta);
            prop_assert!(high.true_positives <= low.true_positives);
            prop_assert!(high.false_positives <= low.false_positives);
        }

        #[test]
        fn f1_symmetric_bounded(p in 0.0f64..=1.0, r in 0.0f64..=1.0) {
            let f = f1_score(p, r);
            prop_assert_eq!(f, f1_score(r, p));
            prop_assert!((0.0..=1.0).contains(&f));
        }

        #[test]
        fn f1_of_equals_is_identity(p in 0.001f64..=1.0) {
            prop_assert!((f1_score(p, p) - p).abs() < 1e-15);
        }

        #[test]
        fn gains_at_most_one(v in 0.001f64..=1.0, pi in 0.001f64..0.999) {
            let pg = precision_gain(v, pi).unwrap();
            let rg = recall_gain(v, pi).unwrap();
            prop_assert!(pg <= 1.0 + 1e-15);
            prop_assert!(rg <= 1.0 + 1e-15);
            if v < 1.0 {
                prop_assert!(pg < 1.0);
            }
        }
    }
}
