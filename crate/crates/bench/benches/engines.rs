use criterion::{criterion_group, criterion_main, Criterion};

use pagesmooth::edit::edit_distance;
use pagesmooth::engines::lru_random::expected_lru_random;
use pagesmooth::engines::random::expected_random;
use pagesmooth::page::CacheConfig;
use pagesmooth_bench::skewed_trace;

fn bench_exact_engines(c: &mut Criterion) {
    let cfg = CacheConfig::new(3).unwrap();
    let trace = skewed_trace(60, 5, 11);
    c.bench_function("expected_random/len60", |b| {
        b.iter(|| expected_random(cfg, &trace, false).unwrap().value)
    });
    c.bench_function("expected_lru_random/len60", |b| {
        b.iter(|| expected_lru_random(cfg, &trace).unwrap().value)
    });
}

fn bench_edit_distance(c: &mut Criterion) {
    let a = skewed_trace(400, 16, 3);
    let b_trace = skewed_trace(400, 16, 4);
    c.bench_function("edit_distance/400x400", |b| {
        b.iter(|| edit_distance(&a, &b_trace))
    });
}

criterion_group!(benches, bench_exact_engines, bench_edit_distance);
criterion_main!(benches);
