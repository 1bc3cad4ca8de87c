use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nframes_bench::fixture;
use nframes_core::certify::{certify, CertifyConfig};
use nframes_core::testkit::{gen_vector, oracle_bounds, GenConfig};
use nframes_core::{canonical_dual, canonical_tight, frame_operator, n_inner, reconstruct};

fn n_inner_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("n_inner");
    for (d, n) in [(3, 2), (6, 3), (8, 4)] {
        let fs = fixture(1, d, n, 2 * d);
        let x = gen_vector(&GenConfig::with_seed(2), d);
        let y = gen_vector(&GenConfig::with_seed(3), d);
        let anchors = fs.space().anchors().clone();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("d{d}n{n}")),
            &(),
            |b, _| b.iter(|| n_inner(black_box(&x), black_box(&y), &anchors).unwrap()),
        );
    }
    group.finish();
}

fn frame_ops(c: &mut Criterion) {
    let mut group = c.benchmark_group("frame_ops");
    for m in [8, 20, 64] {
        let fs = fixture(4, 8, 3, m);
        let f = gen_vector(&GenConfig::with_seed(5), 8);
        group.bench_with_input(BenchmarkId::new("frame_operator", m), &fs, |b, fs| {
            b.iter(|| frame_operator(black_box(fs)))
        });
        group.bench_with_input(BenchmarkId::new("canonical_dual", m), &fs, |b, fs| {
            b.iter(|| canonical_dual(black_box(fs)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("canonical_tight", m), &fs, |b, fs| {
            b.iter(|| canonical_tight(black_box(fs)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("reconstruct", m), &fs, |b, fs| {
            b.iter(|| reconstruct(black_box(&f), fs).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let fs = fixture(6, 6, 2, 12);
    c.bench_function("oracle_bounds_1e3", |b| {
        b.iter(|| oracle_bounds(black_box(&fs), 1000, 7).unwrap())
    });
}

fn certify_small(c: &mut Criterion) {
    let cfg = CertifyConfig {
        trials: 8,
        sup_samples: 100,
        oracle_samples: 100,
        ..CertifyConfig::default()
    };
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    group.bench_function("8_trials", |b| b.iter(|| certify(black_box(&cfg)).unwrap()));
    group.finish();
}

criterion_group!(benches, n_inner_bench, frame_ops, oracle, certify_small);
criterion_main!(benches);
