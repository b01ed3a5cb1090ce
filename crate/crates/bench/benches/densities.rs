use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use densitylab::{
    count, estimate_alpha_density, exact_alpha_extremes, gap_density, materialize, polya_bounds,
    EstimateOptions,
};
use densitylab::tolerances::DEFAULT_THETAS;
use densitylab_bench::fixtures;

const H: u64 = 1 << 18;

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("count");
    for (name, e) in fixtures() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &e, |b, e| {
            b.iter(|| count(e, black_box(1 << 30)))
        });
    }
    g.finish();
}

fn materializing(c: &mut Criterion) {
    let mut g = c.benchmark_group("materialize");
    for (name, e) in fixtures() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &e, |b, e| {
            b.iter(|| materialize(e, black_box(H)))
        });
    }
    g.finish();
}

fn estimates(c: &mut Criterion) {
    let (_, blocks) = &fixtures()[1];
    let opts = EstimateOptions::default();
    let mut g = c.benchmark_group("estimate");
    g.sample_size(20);
    for alpha in [-1.0, 0.0, 1.0] {
        g.bench_with_input(BenchmarkId::new("alpha", alpha), &alpha, |b, &a| {
            b.iter(|| estimate_alpha_density(blocks, a, H, &opts).unwrap())
        });
    }
    g.bench_function("closed_form", |b| {
        b.iter(|| exact_alpha_extremes(blocks, black_box(1.0)).unwrap())
    });
    g.bench_function("polya", |b| b.iter(|| polya_bounds(blocks, &DEFAULT_THETAS, H).unwrap()));
    g.bench_function("gap", |b| b.iter(|| gap_density(blocks, H).unwrap()));
    g.finish();
}

criterion_group!(benches, counting, materializing, estimates);
criterion_main!(benches);
