use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fracfem::analysis::{potential_x_times_1mx, Example};
use fracfem::assembly::{assemble_lead, assemble_system, lead_stencil};
use fracfem::fraccalc::gamma_fn as gamma;
use fracfem::linalg::ToeplitzOperator;
use fracfem::solver::{solve_reconstruction, solve_standard};
use fracfem::{BoundaryCondition, FracOrder, Mesh, Method, ProblemSpec};

fn alpha() -> FracOrder {
    FracOrder::new(1.5).unwrap()
}

fn spec() -> ProblemSpec {
    ProblemSpec::new(alpha(), potential_x_times_1mx(), Example::A.field(), BoundaryCondition::Dirichlet).unwrap()
}

fn gamma_fn(c: &mut Criterion) {
    c.bench_function("gamma", |b| b.iter(|| gamma(black_box(2.37))));
}

fn stiffness(c: &mut Criterion) {
    let mut g = c.benchmark_group("stiffness");
    for m in [256, 1024, 4096] {
        let mesh = Mesh::uniform(m).unwrap();
        g.bench_with_input(BenchmarkId::new("toeplitz_stencil", m), &mesh, |b, mesh| {
            b.iter(|| lead_stencil(mesh, alpha()).unwrap())
        });
    }
    for m in [64, 256] {
        let mesh = Mesh::graded(m, 2.5).unwrap();
        g.bench_with_input(BenchmarkId::new("graded_dense", m), &mesh, |b, mesh| {
            b.iter(|| assemble_lead(mesh, alpha()))
        });
    }
    g.finish();
}

fn toeplitz_apply(c: &mut Criterion) {
    let mut g = c.benchmark_group("toeplitz_apply");
    for m in [1024, 16384] {
        let stencil = lead_stencil(&Mesh::uniform(m).unwrap(), alpha()).unwrap();
        let op = ToeplitzOperator::new(&stencil);
        let x: Vec<f64> = (0..op.n()).map(|i| (i as f64).sin()).collect();
        g.bench_with_input(BenchmarkId::from_parameter(m), &x, |b, x| b.iter(|| op.apply(x)));
    }
    g.finish();
}

fn solves(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    let spec = spec();
    for m in [256, 1024, 4096] {
        let mesh = Mesh::uniform(m).unwrap();
        let sys = assemble_system(&spec, &mesh, Method::Standard).unwrap();
        g.bench_with_input(BenchmarkId::new("standard", m), &sys, |b, sys| b.iter(|| solve_standard(sys).unwrap()));
        g.bench_with_input(BenchmarkId::new("reconstruction", m), &mesh, |b, mesh| {
            b.iter(|| solve_reconstruction(&spec, mesh).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, gamma_fn, stiffness, toeplitz_apply, solves);
criterion_main!(benches);
