use crocco_prandtl::crocco::{CroccoProblem, ExternalFlow, ProblemData};
use crocco_prandtl::mms::{fitted_order, Manufactured};
use crocco_prandtl::solver::{solve, step, FieldSnapshot, Forcing};
use crocco_prandtl::{Execution, GridSpec};

#[test]
fn linear_profile_is_stationary_for_every_eps() {
    let g = GridSpec::new(16, 16, 16, 1.0, 0.5).unwrap();
    let pb = CroccoProblem::new(ExternalFlow::uniform(1.0, 0.5), ProblemData::linear_profile(-1.0));
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let h = solve(&pb, &g, eps, &Forcing::none(), Execution::Parallel).unwrap();
        assert!(h.max_deviation(|_, y, _| 1.0 - y) < 1e-12, "eps {eps}");
    }
}

#[test]
fn linear_manufactured_solution_is_reproduced() {
    let m = Manufactured::linear(1.0, 0.5);
    let g = GridSpec::new(8, 8, 8, 1.0, 0.5).unwrap();
    assert!(m.error(&g, 1e-3, Execution::Sequential).unwrap() < 1e-12);
}

/// One step from exact data: u* is linear in y and x-free, so the spatial
/// stencils are exact and the local error is the O(dt²) time truncation.
#[test]
fn one_step_error_is_second_order_in_dt() {
    let m = Manufactured::pulsating(1.0, 0.5);
    let eps = 1e-3;
    let pb = m.problem(eps);
    let forcing = m.forcing(eps);
    let mut dts = Vec::new();
    let mut errs = Vec::new();
    for nt in [64, 128, 256, 512] {
        let g = GridSpec::new(4, 8, nt, 1.0, 0.5).unwrap();
        let mut values = Vec::new();
        for i in 0..=g.nx {
            for j in 0..=g.ny {
                values.push((m.exact.u)(g.x(i), g.y(j), 0.0));
            }
        }
        let start = FieldSnapshot {
            time: 0.0,
            eps,
            ny: g.ny,
            values,
        };
        let (next, _) = step(&start, 0, &pb, &g, eps, &forcing, Execution::Sequential).unwrap();
        let mut err: f64 = 0.0;
        for i in 0..=g.nx {
            for j in 0..=g.ny {
                err = err.max((next.at(i, j) - (m.exact.u)(g.x(i), g.y(j), g.dt())).abs());
            }
        }
        dts.push(g.dt());
        errs.push(err);
    }
    let order = fitted_order(&dts, &errs);
    assert!(order > 1.9, "one-step order {order}, errors {errs:?}");
}

#[test]
fn coarsened_history_matches_the_coarse_nodes() {
    let g = GridSpec::new(16, 16, 16, 1.0, 0.5).unwrap();
    let pb = CroccoProblem::new(
        ExternalFlow::accelerating(1.0, 0.5),
        ProblemData::new(|_, y| (1.0 - y) * (2.0 + y), |y, _| (1.0 - y) * (2.0 + y), |_, _| -1.0),
    );
    let h = solve(&pb, &g, 1e-2, &Forcing::none(), Execution::Parallel).unwrap();
    let c = h.coarsened(4).unwrap();
    assert_eq!(c.grid.label(), "4x4x4");
    for n in 0..=4 {
        assert_eq!(c.snapshots[n].time, h.snapshots[4 * n].time);
        for i in 0..=4 {
            for j in 0..=4 {
                assert_eq!(c.at(i, j, n), h.at(4 * i, 4 * j, 4 * n));
            }
        }
    }
    assert!(h.coarsened(3).is_none());
    assert!(h.coarsened(0).is_none());
    assert_eq!(h.coarsened(1).unwrap().snapshots, h.snapshots);
}

#[test]
fn cfl_violation_is_reported_before_stepping() {
    let g = GridSpec::new(64, 64, 16, 1.0, 1.0).unwrap();
    let pb = CroccoProblem::new(ExternalFlow::uniform(1.0, 1.0), ProblemData::linear_profile(-1.0));
    let e = solve(&pb, &g, 1e-3, &Forcing::none(), Execution::Parallel).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(e.to_string().contains("need Nt >="), "{e}");
}
