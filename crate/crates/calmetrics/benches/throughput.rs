//! Criterion suite over the hot paths. Run once with the default features
//! and once with `--no-default-features` to compare the rayon-backed and
//! sequential builds; the mode is part of each benchmark id, and criterion
//! baselines (`--save-baseline` / `--baseline`) line the two up.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use calmetrics::{
    correlation_matrix, generate, optimal_scores, oracle_estimate, pr_curve, prior_sweep,
    roc_curve, synth_model_pool, LabeledScores, MetricName, RankMetric, SyntheticSpec,
};

const MODE: &str = if cfg!(feature = "parallel") {
    "parallel"
} else {
    "sequential"
};

fn scored(n: usize, pi: f64, seed: u64) -> LabeledScores {
    let spec = SyntheticSpec {
        mu1: 2.0,
        mu0: 1.8,
        pi,
        n,
        seed,
    };
    optimal_scores(&generate(&spec).unwrap(), &spec).unwrap()
}

fn bench_curves(c: &mut Criterion) {
    let data = scored(100_000, 0.05, 42);
    let mut group = c.benchmark_group("curves");
    group.bench_function(BenchmarkId::new("roc_100k", MODE), |b| {
        b.iter(|| roc_curve(black_box(&data)).unwrap().auc)
    });
    group.bench_function(BenchmarkId::new("pr_100k", MODE), |b| {
        b.iter(|| pr_curve(black_box(&data), None).unwrap().auc)
    });
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let data = scored(20_000, 0.02, 7);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    group.bench_function(BenchmarkId::new("auc_pr_64_runs", MODE), |b| {
        b.iter(|| oracle_estimate(black_box(&data), 0.3, MetricName::AucPr, 64, 11).unwrap())
    });
    group.finish();
}

fn bench_prior_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("experiments");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("prior_sweep_3x4_20k", MODE), |b| {
        b.iter(|| prior_sweep(black_box(&[0.5, 0.1, 0.01]), 4, 0.5, 20_000, 3).unwrap())
    });
    group.finish();
}

fn bench_rank(c: &mut Criterion) {
    let noise: Vec<f64> = (0..10).map(|i| 0.2 * i as f64).collect();
    let pools: Vec<_> = (0..6)
        .map(|p| {
            let spec = SyntheticSpec {
                mu1: 2.0,
                mu0: 1.6,
                pi: 0.1,
                n: 5_000,
                seed: p,
            };
            synth_model_pool(&spec, noise.len(), &noise, 100 + p).unwrap()
        })
        .collect();
    let columns = RankMetric::standard_set(0.5, 1.01);
    let mut group = c.benchmark_group("rank");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("matrix_6x10", MODE), |b| {
        b.iter(|| correlation_matrix(black_box(&pools), black_box(&columns)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_curves,
    bench_oracle,
    bench_prior_sweep,
    bench_rank
);
criterion_main!(benches);
