use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use evendecomp::*;

fn exact_oracles(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_even_decomposable");
    for n in [8, 12, 16] {
        let g = sample_gnp_even(SamplerSpec::new(n, 0.5, 1)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| exact_even_decomposable(black_box(g)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("exact_even_degenerate");
    for n in [10, 16, 22] {
        let g = sample_gnp(SamplerSpec::new(n, 0.5, 2)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| exact_even_degenerate(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn censuses(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for n in [5, 6] {
        let opts = CensusOptions {
            decomposability: true,
            degeneracy: true,
            exemplars: 0,
            workers: 1,
        };
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| census(n, opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exact_oracles, censuses);
criterion_main!(benches);
