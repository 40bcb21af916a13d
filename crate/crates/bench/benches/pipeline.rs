use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dirac_weyl_bench::{flat_problem, well_problem};
use dirac_weyl_core::tauberian::{mollified_projector, Mollifier};
use dirac_weyl_core::{
    assemble_operator, compute_i, problem_kernel, solve, weyl_leading, EnergyQuadrature, PotentialExpression,
    SingularWeight,
};
use std::hint::black_box;

fn eigensolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigensolve");
    g.sample_size(10);
    for h in [0.2, 0.1] {
        let p = well_problem(h);
        g.bench_with_input(BenchmarkId::from_parameter(p.grid.n_points), &p, |b, p| {
            b.iter(|| solve(black_box(p)).unwrap())
        });
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let p = flat_problem(0.2);
    let eigs = solve(&p).unwrap();
    let kernel = problem_kernel(&p, &eigs);
    let w = SingularWeight::pure_power(0.5).unwrap();
    c.bench_function("compute_i/flat_h0.2", |b| {
        b.iter(|| compute_i(&EnergyQuadrature::new(&kernel, &w, &p.psi1, &p.psi2)).unwrap())
    });
    c.bench_function("weyl_leading/flat_h0.2", |b| {
        b.iter(|| weyl_leading(black_box(&p), &w).unwrap())
    });
}

fn tauberian(c: &mut Criterion) {
    let p = well_problem(0.1);
    let eigs = solve(&p).unwrap();
    let m = Mollifier::canonical();
    c.bench_function("mollified_projector/well_h0.1", |b| {
        b.iter(|| mollified_projector(&eigs, m, p.h, 0.4, None).unwrap())
    });
}

fn small_pieces(c: &mut Criterion) {
    let p = well_problem(0.1);
    c.bench_function("assemble_operator", |b| {
        b.iter(|| assemble_operator(black_box(&p)).unwrap())
    });
    c.bench_function("parse_potential", |b| {
        b.iter(|| PotentialExpression::parse(black_box("1 - (x^2 - 1)^2 + 0.3*sin(2*x)")).unwrap())
    });
}

criterion_group!(benches, eigensolve, quadrature, tauberian, small_pieces);
criterion_main!(benches);
