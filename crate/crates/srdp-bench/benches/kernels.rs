use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use srdp_bench::{capacity_channel, symmetric_osrb};
use srdp_core::bc::capacity_unsecure;
use srdp_core::closed_form::binary_min_r;
use srdp_core::noiseless::{frontier_sweep, DistortionMeasure, SearchConfig};
use srdp_core::osrb::metrics;
use srdp_core::prob::Pmf;

fn bench_capacity(c: &mut Criterion) {
    let ch = capacity_channel();
    c.bench_function("blahut_arimoto_4x5", |b| {
        b.iter(|| capacity_unsecure(black_box(&ch)).unwrap())
    });
}

fn bench_closed_form(c: &mut Criterion) {
    c.bench_function("binary_min_r", |b| {
        b.iter(|| binary_min_r(black_box(0.6), black_box(0.2)).unwrap())
    });
}

fn bench_frontier_point(c: &mut Criterion) {
    let q = Pmf::uniform(2);
    let d = DistortionMeasure::hamming(2);
    let cfg = SearchConfig {
        starts: 4,
        ..SearchConfig::default()
    };
    c.bench_function("frontier_point_binary", |b| {
        b.iter(|| frontier_sweep(black_box(&q), black_box(&d), &[(0.7, 0.2)], &cfg).unwrap())
    });
}

fn bench_osrb_metrics(c: &mut Criterion) {
    let cfg = symmetric_osrb(6);
    c.bench_function("osrb_metrics_n6", |b| {
        b.iter(|| metrics(black_box(&cfg)).unwrap())
    });
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = bench_capacity, bench_closed_form, bench_frontier_point, bench_osrb_metrics
}
criterion_main!(kernels);
