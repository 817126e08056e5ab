//! Small statistical accumulators shared by the Monte-Carlo oracle and the
//! experiment drivers.

/// Streaming mean/variance accumulator (Welford), mergeable so partial
/// results from independent workers can be combined.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanVar {
    n: u64,
    mean: f64,
    m2: f64,
}

impl MeanVar {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * self.n as f64 * other.n as f64 / n as f64;
        Self { n, mean, m2 }
    }

    pub fn from_values(values: &[f64]) -> Self {
        let mut acc = Self::default();
        for &v in values {
            acc.push(v);
        }
        acc
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance (n - 1 denominator); 0 for fewer than two values.
    pub fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn sample_std(&self) -> f64 {
        self.sample_variance().sqrt()
    }

    /// Normal-approximation confidence half-width `1.96 * std / sqrt(n)`.
    pub fn ci_half_width(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        1.96 * self.sample_std() / (self.n as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_two_pass_computation() {
        let values = [0.3, 0.7, 0.1, 0.9, 0.45, 0.2];
        let acc = MeanVar::from_values(&values);
        let mean: f64 = values.iter().sum::<f64>() / values.len() as f64;
        let var: f64 =
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
        assert!((acc.mean() - mean).abs() < 1e-14);
        assert!((acc.sample_variance() - var).abs() < 1e-14);
    }

    #[test]
    fn identical_values_give_exactly_zero_variance() {
        let acc = MeanVar::from_values(&[0.3721; 17]);
        assert_eq!(acc.sample_variance(), 0.0);
        assert_eq!(acc.mean(), 0.3721);
    }

    #[test]
    fn merge_agrees_with_sequential_fill() {
        let all = [0.1, 0.4, 0.2, 0.9, 0.8, 0.3, 0.5];
        let whole = MeanVar::from_values(&all);
        let merged = MeanVar::from_values(&all[..3]).merge(MeanVar::from_values(&all[3..]));
        assert_eq!(merged.count(), whole.count());
        assert!((merged.mean() - whole.mean()).abs() < 1e-14);
        assert!((merged.sample_variance() - whole.sample_variance()).abs() < 1e-14);
    }
}
