use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qsl2_core::estimate::{self, CoupledBatch, Execution, McConfig, DEFAULT_SEED};
use qsl2_core::rng::StreamKey;
use qsl2_core::sim;

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn coupled_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("coupled_batch_n64");
    group.sample_size(10);
    for eps in [1e-3, 1e-4] {
        for (name, execution) in modes() {
            let cfg = McConfig { seed: DEFAULT_SEED, execution, ..McConfig::default() };
            group.bench_with_input(BenchmarkId::new(name, eps), &eps, |b, &eps| {
                b.iter(|| CoupledBatch::run(64, eps, 200, &cfg).unwrap().a_sq())
            });
        }
    }
    group.finish();
}

fn level_profile(c: &mut Criterion) {
    let mut group = c.benchmark_group("level_profile_j10");
    group.sample_size(10);
    for (name, execution) in modes() {
        let cfg = McConfig { seed: DEFAULT_SEED, execution, ..McConfig::default() };
        group.bench_function(name, |b| b.iter(|| estimate::level_variance_profile(10, 2_000, &cfg).unwrap()));
    }
    group.finish();
}

fn limit_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("pruned_limit_sample");
    for eps in [1e-3, 1e-5] {
        group.bench_with_input(BenchmarkId::from_parameter(eps), &eps, |b, &eps| {
            let mut r = 0u64;
            b.iter(|| {
                r += 1;
                sim::sample_limit(black_box(StreamKey::from_seed(r)), eps)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, coupled_batch, level_profile, limit_series);
criterion_main!(benches);
