use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use snmf_bench::{blob_data, blob_problem};
use snmf_core::graph::{build_adjacency, GraphConfig};
use snmf_core::linalg::{cholesky_factor, sparse_dense_mul, spectral_norm};
use std::hint::black_box;

fn graph_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph_build");
    group.sample_size(10);
    for n in [500, 1000, 2000] {
        let data = blob_data(n, 4, 0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| build_adjacency(black_box(data), &GraphConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn sparse_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("sparse_dense_mul");
    for n in [1000, 4000] {
        let (a, init) = blob_problem(n, 8, 0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(a, init), |b, (a, init)| {
            b.iter(|| sparse_dense_mul(black_box(a), black_box(init)).unwrap())
        });
    }
    group.finish();
}

fn small_dense(c: &mut Criterion) {
    let (_, init) = blob_problem(1000, 16, 0);
    let mut gram = init.gram();
    gram.add_diagonal(0.1);
    c.bench_function("cholesky_k16", |b| b.iter(|| cholesky_factor(black_box(&gram)).unwrap()));
    c.bench_function("spectral_norm_k16", |b| b.iter(|| spectral_norm(black_box(&gram)).unwrap()));
}

criterion_group!(benches, graph_build, sparse_mul, small_dense);
criterion_main!(benches);
