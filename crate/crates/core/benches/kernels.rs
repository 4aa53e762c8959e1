use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use crocco_prandtl::config::{RunConfig, ScenarioName};
use crocco_prandtl::kolmogorov::{
    model_scenarios, oscillation_table, poincare_measurement, solve_rough, LogTransform, RoughGrid,
};
use crocco_prandtl::scenario::{build_data, build_flow, poincare_cutoff, POINCARE_LEVEL};
use crocco_prandtl::solver::{solve, viscosity_sweep, Forcing};
use crocco_prandtl::{crocco::CroccoProblem, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn favorable() -> (CroccoProblem, RunConfig) {
    let c = RunConfig::new(ScenarioName::FavorableAccel);
    (CroccoProblem::new(build_flow(&c).unwrap(), build_data(&c).unwrap()), c)
}

fn crocco_solve(cr: &mut Criterion) {
    let (pb, c) = favorable();
    let mut g = cr.benchmark_group("solve_64");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| solve(black_box(&pb), &c.grid, 1e-3, &Forcing::none(), exec).unwrap())
        });
    }
    g.finish();
}

fn eps_sweep(cr: &mut Criterion) {
    let (pb, c) = favorable();
    let mut g = cr.benchmark_group("sweep_64");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| viscosity_sweep(black_box(&pb), &c.grid, &c.eps_list, exec).unwrap())
        });
    }
    g.finish();
}

fn rough(cr: &mut Criterion) {
    let coef = model_scenarios("seeded-random", 4.0, 2024).unwrap();
    let grid = RoughGrid::new(64).unwrap();
    let c = RunConfig::new(ScenarioName::OscillationLab);
    let spec = poincare_cutoff(&c).unwrap();
    let u = solve_rough(&coef, grid, Execution::Parallel).unwrap();
    let mut g = cr.benchmark_group("rough_64");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("solve", name), |b| {
            b.iter(|| solve_rough(black_box(&coef), grid, exec).unwrap())
        });
        g.bench_function(BenchmarkId::new("oscillation", name), |b| {
            b.iter(|| oscillation_table(black_box(&u), c.theta_bar, &c.r_list, exec).unwrap())
        });
        g.bench_function(BenchmarkId::new("poincare", name), |b| {
            b.iter(|| poincare_measurement(black_box(&u), &spec, POINCARE_LEVEL, LogTransform::Shifted, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, crocco_solve, eps_sweep, rough);
criterion_main!(benches);
