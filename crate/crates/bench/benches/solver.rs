use criterion::{black_box, criterion_group, criterion_main, Criterion};
use orlicz_bench::{four_atoms, two_atoms};
use orlicz_core::minkowski_solver::{cell_masses, solver_dual_grid};
use orlicz_core::{solve, SolveOptions, WeightFunction};

fn cells(c: &mut Criterion) {
    let mu = four_atoms();
    let points = mu.points();
    let grid = solver_dual_grid(&points, 2, None).unwrap();
    let w = WeightFunction::constant(2);
    let v = vec![0.0; points.len()];
    c.bench_function("cell masses 2D four atoms", |b| {
        b.iter(|| cell_masses(black_box(&v), &points, &w, &grid).unwrap())
    });
}

fn solves(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    let mu = two_atoms();
    let w = WeightFunction::constant(1);
    group.bench_function("two atoms", |b| {
        b.iter(|| solve(black_box(&mu), &w, &SolveOptions::default()).unwrap())
    });
    let mu = four_atoms();
    let w = WeightFunction::constant(2);
    group.bench_function("four atoms", |b| {
        b.iter(|| solve(black_box(&mu), &w, &SolveOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, cells, solves);
criterion_main!(benches);
