//! Spearman rank-correlation analysis of how metrics order model pools.
//!
//! A pool is one dataset with scores from several models; correlating the
//! per-model metric vectors shows which metrics agree on model selection and
//! how the calibrated variants relate to the plain ones under different
//! reference-prior rules.

use std::fmt::Write as _;
use std::io::Read;

use rand::distr::Distribution;
use rand_distr::Normal;

use crate::calibration::{metric_value, MetricName};
use crate::data::LabeledScores;
use crate::error::{Error, Result};
use crate::par;
use crate::seeding::{derive_seed, rng_from};
use crate::synthetic::{generate, optimal_score, SyntheticSpec};

/// Shared labels plus one score vector per model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPool {
    dataset_id: String,
    labels: Vec<u8>,
    model_names: Vec<String>,
    model_scores: Vec<Vec<f64>>,
}

impl ModelPool {
    pub fn new(
        dataset_id: impl Into<String>,
        labels: Vec<u8>,
        model_names: Vec<String>,
        model_scores: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if model_scores.len() < 2 {
            return Err(Error::InvalidConfig(
                "a model pool needs at least two models".into(),
            ));
        }
        if model_names.len() != model_scores.len() {
            return Err(Error::LengthMismatch {
                left: model_names.len(),
                right: model_scores.len(),
            });
        }
        for scores in &model_scores {
            // Validates lengths, label values and score finiteness.
            LabeledScores::new(labels.clone(), scores.clone())?;
        }
        Ok(Self {
            dataset_id: dataset_id.into(),
            labels,
            model_names,
            model_scores,
        })
    }

    /// Parse a pool from CSV: a `label` column followed by one score column
    /// per model, the header row naming the models.
    pub fn from_csv_reader(reader: impl Read, dataset_id: impl Into<String>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Serialization(e.to_string()))?
            .clone();
        if headers.len() < 3 || headers.get(0) != Some("label") {
            return Err(Error::InvalidConfig(
                "pool CSV needs a `label` column followed by at least two model columns".into(),
            ));
        }
        let model_names: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut labels = Vec::new();
        let mut model_scores = vec![Vec::new(); model_names.len()];
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Serialization(e.to_string()))?;
            if record.len() != headers.len() {
                return Err(Error::InvalidConfig(format!(
                    "pool CSV row has {} fields, expected {}",
                    record.len(),
                    headers.len()
                )));
            }
            let label: u8 = record[0]
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad label `{}`", &record[0])))?;
            labels.push(label);
            for (m, scores) in model_scores.iter_mut().enumerate() {
                let s: f64 = record[m + 1]
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("bad score `{}`", &record[m + 1])))?;
                scores.push(s);
            }
        }
        Self::new(dataset_id, labels, model_names, model_scores)
    }

    pub fn dataset_id(&self) -> &str {
        &self.dataset_id
    }

    pub fn num_models(&self) -> usize {
        self.model_scores.len()
    }

    pub fn model_names(&self) -> &[String] {
        &self.model_names
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn positive_ratio(&self) -> f64 {
        self.labels.iter().filter(|&&l| l == 1).count() as f64 / self.labels.len() as f64
    }

    fn model_data(&self, index: usize) -> LabeledScores {
        LabeledScores::new(self.labels.clone(), self.model_scores[index].clone())
            .expect("validated at construction")
    }
}

/// How the reference prior of a calibrated column is chosen per pool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pi0Rule {
    /// A fixed value shared by all pools.
    Absolute(f64),
    /// A multiple of the pool's empirical prior, e.g. `1.01 * pi`.
    MultipleOfPi(f64),
}

impl Pi0Rule {
    pub fn resolve(&self, pi: f64) -> Result<f64> {
        let pi0 = match self {
            Pi0Rule::Absolute(v) => *v,
            Pi0Rule::MultipleOfPi(m) => m * pi,
        };
        crate::data::check_open_unit(pi0, "pi0")?;
        Ok(pi0)
    }
}

/// One column of the correlation analysis: a metric, optionally calibrated
/// under a reference-prior rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankMetric {
    pub metric: MetricName,
    pub pi0_rule: Option<Pi0Rule>,
}

impl RankMetric {
    pub fn plain(metric: MetricName) -> Self {
        Self {
            metric,
            pi0_rule: None,
        }
    }

    pub fn calibrated(metric: MetricName, rule: Pi0Rule) -> Self {
        Self {
            metric,
            pi0_rule: Some(rule),
        }
    }

    pub fn column_name(&self) -> String {
        match self.pi0_rule {
            None => self.metric.as_str().to_string(),
            Some(Pi0Rule::Absolute(v)) => format!("{}[pi0={v}]", self.metric),
            Some(Pi0Rule::MultipleOfPi(m)) => format!("{}[pi0={m}pi]", self.metric),
        }
    }

    /// The ten standard columns: the four plain threshold-free metrics plus
    /// the calibrated PR / PR-Gain / best-F1 under an absolute rule and a
    /// multiple-of-pi rule.
    pub fn standard_set(absolute_pi0: f64, pi0_multiple: f64) -> Vec<RankMetric> {
        let abs = Pi0Rule::Absolute(absolute_pi0);
        let mult = Pi0Rule::MultipleOfPi(pi0_multiple);
        vec![
            RankMetric::plain(MetricName::AucRoc),
            RankMetric::plain(MetricName::AucPr),
            RankMetric::plain(MetricName::AucPrGain),
            RankMetric::plain(MetricName::BestF1),
            RankMetric::calibrated(MetricName::AucPrC, mult),
            RankMetric::calibrated(MetricName::AucPrC, abs),
            RankMetric::calibrated(MetricName::AucPrGainC, mult),
            RankMetric::calibrated(MetricName::AucPrGainC, abs),
            RankMetric::calibrated(MetricName::BestF1C, mult),
            RankMetric::calibrated(MetricName::BestF1C, abs),
        ]
    }
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // 1-based average rank of the tie group [i, j].
        let avg = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties: the Pearson
/// correlation of the two rank vectors. Errors on constant input.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::InvalidConfig(
            "rank correlation needs at least two observations".into(),
        ));
    }
    for (index, &v) in a.iter().chain(b.iter()).enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteScore {
                index: index % a.len(),
            });
        }
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = ra.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in ra.iter().zip(&rb) {
        cov += (x - mean) * (y - mean);
        var_a += (x - mean) * (x - mean);
        var_b += (y - mean) * (y - mean);
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::ConstantVector);
    }
    Ok(cov / (var_a * var_b).sqrt())
}

/// Evaluate one metric for every model in the pool, resolving the reference
/// prior from the pool's empirical prior when the column is calibrated.
pub fn metric_vector(pool: &ModelPool, column: &RankMetric) -> Result<Vec<f64>> {
    if column.metric.is_calibrated() != column.pi0_rule.is_some() {
        return Err(Error::InvalidConfig(format!(
            "column `{}` pairs a {} metric with the wrong pi0 rule",
            column.column_name(),
            if column.metric.is_calibrated() {
                "calibrated"
            } else {
                "plain"
            }
        )));
    }
    let pi0 = column
        .pi0_rule
        .map(|rule| rule.resolve(pool.positive_ratio()))
        .transpose()?;
    par::map_indexed(pool.num_models(), |m| {
        metric_value(&pool.model_data(m), column.metric, pi0)
    })
    .into_iter()
    .collect()
}

/// Average pairwise Spearman correlations of metric columns over pools.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub metric_names: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Pools that contributed to the averages.
    pub pools_used: usize,
    /// Pools dropped because some metric or correlation failed on them.
    pub skipped: usize,
}

impl CorrelationMatrix {
    pub fn entry(&self, row: &str, col: &str) -> Option<f64> {
        let i = self.metric_names.iter().position(|n| n == row)?;
        let j = self.metric_names.iter().position(|n| n == col)?;
        Some(self.values[i][j])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# pools_used: {}", self.pools_used).unwrap();
        writeln!(out, "# skipped: {}", self.skipped).unwrap();
        out.push_str("metric");
        for name in &self.metric_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (name, row) in self.metric_names.iter().zip(&self.values) {
            out.push_str(name);
            for v in row {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Compute every pairwise Spearman correlation per pool and average across
/// pools. Pools on which any column or any pairwise correlation fails are
/// skipped and counted. Pools are processed in parallel; the averages fold
/// in pool order.
pub fn correlation_matrix(
    pools: &[ModelPool],
    columns: &[RankMetric],
) -> Result<CorrelationMatrix> {
    if pools.is_empty() {
        return Err(Error::InvalidConfig("no pools given".into()));
    }
    if columns.len() < 2 {
        return Err(Error::InvalidConfig(
            "correlation needs at least two metric columns".into(),
        ));
    }
    let k = columns.len();

    let per_pool: Vec<Option<Vec<Vec<f64>>>> = par::map_indexed(pools.len(), |p| {
        let pool = &pools[p];
        let mut vectors = Vec::with_capacity(k);
        for column in columns {
            match metric_vector(pool, column) {
                Ok(v) => vectors.push(v),
                Err(_) => return None,
            }
        }
        let mut matrix = vec![vec![1.0; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                match spearman(&vectors[i], &vectors[j]) {
                    Ok(rho) => {
                        matrix[i][j] = rho;
                        matrix[j][i] = rho;
                    }
                    Err(_) => return None,
                }
            }
        }
        Some(matrix)
    });

    let mut sums = vec![vec![0.0; k]; k];
    let mut used = 0usize;
    let mut skipped = 0usize;
    for pool_matrix in per_pool {
        match pool_matrix {
            Some(m) => {
                for (srow, mrow) in sums.iter_mut().zip(&m) {
                    for (s, v) in srow.iter_mut().zip(mrow) {
                        *s += v;
                    }
                }
                used += 1;
            }
            None => skipped += 1,
        }
    }
    if used == 0 {
        return Err(Error::InvalidConfig(
            "every pool failed metric evaluation".into(),
        ));
    }

    let mut values: Vec<Vec<f64>> = sums
        .into_iter()
        .map(|row| row.into_iter().map(|s| s / used as f64).collect())
        .collect();
    for (i, row) in values.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    Ok(CorrelationMatrix {
        metric_names: columns.iter().map(RankMetric::column_name).collect(),
        values,
        pools_used: used,
        skipped,
    })
}

/// Build a synthetic pool: models of graded quality obtained by adding
/// Gaussian noise of per-model standard deviation `noise_grid[i]` to the
/// optimal score. Noise 0 reproduces the optimal scorer exactly.
pub fn synth_model_pool(
    spec: &SyntheticSpec,
    num_models: usize,
    noise_grid: &[f64],
    seed: u64,
) -> Result<ModelPool> {
    if num_models < 2 {
        return Err(Error::InvalidConfig(
            "a model pool needs at least two models".into(),
        ));
    }
    if noise_grid.len() != num_models {
        return Err(Error::LengthMismatch {
            left: noise_grid.len(),
            right: num_models,
        });
    }
    let data = generate(spec)?;
    let base: Vec<f64> = data
        .features
        .iter()
        .map(|&x| optimal_score(x, spec))
        .collect();
    let model_scores: Vec<Vec<f64>> = par::map_indexed(num_models, |m| {
        let sigma = noise_grid[m];
        let mut rng = rng_from(derive_seed(seed, m as u64));
        let noise = Normal::new(0.0, 1.0).expect("unit normal");
        base.iter()
            .map(|&s| s + sigma * noise.sample(&mut rng))
            .collect()
    });
    let model_names = (0..num_models).map(|m| format!("model_{m:02}")).collect();
    ModelPool::new(
        format!("synth-{}", spec.seed),
        data.labels,
        model_names,
        model_scores,
    )
}
