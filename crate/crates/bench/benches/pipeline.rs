use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use toricstrat_bench::benchmark_inputs;
use toricstrat_core::lattice::{hnf, kernel_basis, snf};
use toricstrat_core::polyhedral::{cone_lattice, polytope_lattice};
use toricstrat_core::{parse_input, stratify, verify_all, VerifyOptions};

fn bench_stratify(c: &mut Criterion) {
    let mut group = c.benchmark_group("stratify");
    for (name, doc) in benchmark_inputs() {
        if name == "i5" {
            group.sample_size(10);
        }
        let spec = parse_input(doc).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &spec, |b, spec| {
            b.iter(|| stratify(black_box(spec)).unwrap())
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for (name, doc) in benchmark_inputs().into_iter().take(4) {
        let spec = parse_input(doc).unwrap();
        let strat = stratify(&spec).unwrap();
        let opts = VerifyOptions::default();
        group.bench_function(name, |b| b.iter(|| verify_all(&spec, &strat, &opts)));
    }
    group.finish();
}

fn bench_lattice(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice");
    for (name, doc) in benchmark_inputs() {
        let v = parse_input(doc).unwrap().exponent_matrix();
        group.bench_function(BenchmarkId::new("hnf", name), |b| b.iter(|| hnf(black_box(&v))));
        group.bench_function(BenchmarkId::new("snf", name), |b| b.iter(|| snf(black_box(&v))));
        group.bench_function(BenchmarkId::new("kernel", name), |b| b.iter(|| kernel_basis(black_box(&v))));
    }
    group.finish();
}

fn bench_hull(c: &mut Criterion) {
    let mut group = c.benchmark_group("hull");
    for (name, doc) in benchmark_inputs().into_iter().take(4) {
        let v = parse_input(doc).unwrap().exponent_matrix();
        let points = kernel_basis(&v).columns();
        group.bench_function(BenchmarkId::new("polytope", name), |b| {
            b.iter(|| polytope_lattice(black_box(&points)).unwrap())
        });
        group.bench_function(BenchmarkId::new("cone", name), |b| b.iter(|| cone_lattice(black_box(&points))));
    }
    group.finish();
}

criterion_group!(benches, bench_stratify, bench_verify, bench_lattice, bench_hull);
criterion_main!(benches);
