use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use snmf_bench::blob_problem;
use snmf_core::admm::{solve_admm, AdmmConfig, AdmmSolver};
use snmf_core::apg::{ApgConfig, ApgSolver};
use std::hint::black_box;

fn admm_iteration(c: &mut Criterion) {
    let mut group = c.benchmark_group("admm_iteration");
    for n in [1000, 2000, 4000] {
        let (a, init) = blob_problem(n, 5, 0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            let mut solver = AdmmSolver::new(&a, 5, AdmmConfig::default(), Some(&init)).unwrap();
            b.iter(|| black_box(solver.iterate().unwrap()))
        });
    }
    group.finish();
}

fn apg_outer_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("apg_outer_step");
    for n in [1000, 2000] {
        let (a, init) = blob_problem(n, 5, 0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter_batched(
                || ApgSolver::new(&a, 5, ApgConfig::default(), Some(&init)).unwrap(),
                |mut solver| black_box(solver.outer_step().unwrap()),
                criterion::BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn admm_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("admm_solve");
    group.sample_size(10);
    let (a, init) = blob_problem(1000, 4, 0);
    group.bench_function("n1000_k4", |b| {
        b.iter(|| solve_admm(&a, 4, &AdmmConfig::default(), Some(&init)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, admm_iteration, apg_outer_step, admm_solve);
criterion_main!(benches);
