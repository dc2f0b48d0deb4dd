use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use radtail::certify::{Certifier, CertifyConfig, Claim};
use radtail::search::grid_search;
use radtail::{exact_tail, normal_tail, normalize};

fn exact(c: &mut Criterion) {
    let raw: Vec<f64> = (1..=30).map(|i| 1.0 / f64::from(i)).collect();
    let w = normalize(&raw).unwrap();
    c.bench_function("exact_tail n=30", |b| b.iter(|| exact_tail(black_box(&w), black_box(1.5)).unwrap()));
    let w = normalize(&[1.0; 20]).unwrap();
    c.bench_function("exact_tail n=20 uniform", |b| b.iter(|| exact_tail(black_box(&w), black_box(2.0)).unwrap()));
}

fn gaussian(c: &mut Criterion) {
    c.bench_function("normal_tail series", |b| b.iter(|| normal_tail(black_box(1.3)).unwrap()));
    c.bench_function("normal_tail continued fraction", |b| b.iter(|| normal_tail(black_box(6.0)).unwrap()));
}

fn certify(c: &mut Criterion) {
    let certifier = Certifier::new(CertifyConfig::default()).unwrap();
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    group.bench_function("G_NEG", |b| b.iter(|| certifier.certify(black_box(Claim::GNeg))));
    group.bench_function("LEM2", |b| b.iter(|| certifier.certify(black_box(Claim::Lem2))));
    group.finish();
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("grid n=3 step=0.02", |b| b.iter(|| grid_search(black_box(3), 0.02).unwrap()));
    group.finish();
}

criterion_group!(benches, exact, gaussian, certify, search);
criterion_main!(benches);
