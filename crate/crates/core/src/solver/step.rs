use std::fmt;
use std::sync::Arc;

use super::history::{FieldHistory, FieldSnapshot, StepDiagnostics};
use super::{tridiag, upwind, MAX_NEWTON_ITERATIONS};
use crate::crocco::{CroccoProblem, PointCoefficients};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::par::Execution;

/// Optional right-hand side f(x, y, t); `Forcing::none()` is the
/// unforced equation.
#[derive(Clone, Default)]
pub struct Forcing(Option<Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>>);

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0.is_some() { "Forcing(Some)" } else { "Forcing(None)" })
    }
}

impl Forcing {
    pub fn none() -> Self {
        Forcing(None)
    }

    pub fn new(f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Forcing(Some(Arc::new(f)))
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        self.0.as_ref().map_or(0.0, |f| f(x, y, t))
    }
}

struct ColumnResult {
    values: Vec<f64>,
    newton: usize,
    max_transport: f64,
    max_b: f64,
}

struct Context<'a> {
    problem: &'a CroccoProblem,
    grid: &'a GridSpec,
    eps: f64,
    forcing: &'a Forcing,
    prev: &'a FieldSnapshot,
    t0: f64,
    t1: f64,
}

impl Context<'_> {
    fn inflow_column(&self) -> ColumnResult {
        let g = self.grid;
        let mut values: Vec<f64> = (0..=g.ny).map(|j| self.problem.w1(g.y(j), self.t1)).collect();
        values[g.ny] = 0.0;
        ColumnResult {
            values,
            newton: 0,
            max_transport: 0.0,
            max_b: 0.0,
        }
    }

    fn column(&self, i: usize) -> Result<ColumnResult> {
        let g = self.grid;
        let eps = self.eps;
        let (dx, dy, dt) = (g.dx(), g.dy(), g.dt());
        let x = g.x(i);
        let s0 = self.problem.flow.eval(x, self.t0);
        let s1 = self.problem.flow.eval(x, self.t1);
        let here = self.prev.column(i);
        let left = self.prev.column(i - 1);

        let m = g.ny - 1;
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut p = vec![0.0; m];
        let mut q = vec![0.0; m];
        let mut max_transport: f64 = 0.0;
        let mut max_b: f64 = 0.0;

        for k in 0..m {
            let j = k + 1;
            let y = g.y(j);
            let k0 = PointCoefficients::from_flow(s0, y);
            let k1 = PointCoefficients::from_flow(s1, y);
            let lam = (here[j] + eps).powi(2) / (dy * dy);
            let transport = (k0.a + eps) * (here[j] - left[j]) / dx
                + upwind(k0.b, here[j - 1], here[j], here[j + 1], dy);
            max_transport = max_transport.max(k0.a + eps);
            max_b = max_b.max(k0.b.abs());
            lower[k] = -lam;
            upper[k] = -lam;
            diag[k] = 1.0 / dt + k1.c + 2.0 * lam;
            p[k] = here[j] / dt - transport + self.forcing.eval(x, y, self.t0);
            if k == 0 {
                // unit response to the wall value u0
                q[k] = lam;
            }
        }
        let mut scratch = Vec::new();
        if !tridiag::solve2(&lower, &diag, &upper, &mut p, &mut q, &mut scratch) {
            return Err(Error::Numerical(format!("singular diffusion system in column {i}")));
        }

        // Wall row: (u0+ε)(−3u0 + 4u1 − u2)/(2dy) = v0 (u0+ε) + ∂xP/U with
        // u1 = p1 + u0 q1, u2 = p2 + u0 q2.
        let v0 = self.problem.v0(x, self.t1);
        let px = s1.px_over_u();
        let alpha = (4.0 * p[0] - p[1]) / (2.0 * dy);
        let beta = (-3.0 + 4.0 * q[0] - q[1]) / (2.0 * dy);
        let mut u0 = here[0];
        let mut iterations = 0;
        loop {
            let slope = alpha + beta * u0 - v0;
            let f = (u0 + eps) * slope - px;
            let df = slope + beta * (u0 + eps);
            if df == 0.0 || !df.is_finite() {
                return Err(Error::Numerical(format!("wall Newton derivative vanished in column {i}")));
            }
            let delta = f / df;
            u0 -= delta;
            iterations += 1;
            if delta.abs() <= 1e-14 * (1.0 + u0.abs()) {
                break;
            }
            if iterations >= MAX_NEWTON_ITERATIONS {
                return Err(Error::Numerical(format!(
                    "wall Newton did not converge in {MAX_NEWTON_ITERATIONS} iterations in column {i}"
                )));
            }
        }

        let mut values = Vec::with_capacity(g.ny + 1);
        values.push(u0);
        for k in 0..m {
            values.push(p[k] + u0 * q[k]);
        }
        values.push(0.0);
        if let Some(j) = values.iter().position(|&v| !(v >= 0.0)) {
            return Err(Error::Numerical(format!(
                "negative value {:.3e} at column {i}, row {j}",
                values[j]
            )));
        }
        Ok(ColumnResult {
            values,
            newton: iterations,
            max_transport,
            max_b,
        })
    }
}

/// Advances `state` (at time index `n`) by one time step.
pub fn step(
    state: &FieldSnapshot,
    n: usize,
    problem: &CroccoProblem,
    grid: &GridSpec,
    eps: f64,
    forcing: &Forcing,
    exec: Execution,
) -> Result<(FieldSnapshot, StepDiagnostics)> {
    let ctx = Context {
        problem,
        grid,
        eps,
        forcing,
        prev: state,
        t0: grid.t(n),
        t1: grid.t(n + 1),
    };
    let columns = exec.map(grid.nx + 1, |i| {
        if i == 0 {
            Ok(ctx.inflow_column())
        } else {
            ctx.column(i)
        }
    });
    let mut values = Vec::with_capacity(grid.nodes_per_snapshot());
    let mut diag = StepDiagnostics::default();
    let (mut amax, mut bmax): (f64, f64) = (0.0, 0.0);
    for c in columns {
        let c = c?;
        values.extend_from_slice(&c.values);
        diag.newton_iterations += c.newton;
        diag.max_newton_iterations = diag.max_newton_iterations.max(c.newton);
        amax = amax.max(c.max_transport);
        bmax = bmax.max(c.max_b);
    }
    diag.cfl_margin = grid.cfl_margin(amax, bmax);
    Ok((
        FieldSnapshot {
            time: ctx.t1,
            eps,
            ny: grid.ny,
            values,
        },
        diag,
    ))
}

/// Initial snapshot: w0 inside, w1 on the inflow column, 0 on y = 1.
pub(crate) fn initial_snapshot(problem: &CroccoProblem, grid: &GridSpec, eps: f64) -> Result<FieldSnapshot> {
    let mut values = Vec::with_capacity(grid.nodes_per_snapshot());
    for i in 0..=grid.nx {
        for j in 0..=grid.ny {
            let (x, y) = (grid.x(i), grid.y(j));
            let v = if j == grid.ny {
                0.0
            } else if i == 0 {
                problem.w1(y, 0.0)
            } else {
                problem.w0(x, y)
            };
            if !(v >= 0.0) {
                return Err(Error::Config(format!("initial data {v} at (x, y) = ({x}, {y}) is negative")));
            }
            values.push(v);
        }
    }
    Ok(FieldSnapshot {
        time: 0.0,
        eps,
        ny: grid.ny,
        values,
    })
}

/// Solves the regularized problem on the whole of Q_T.
pub fn solve(
    problem: &CroccoProblem,
    grid: &GridSpec,
    eps: f64,
    forcing: &Forcing,
    exec: Execution,
) -> Result<FieldHistory> {
    grid.check()?;
    if !(eps > 0.0) {
        return Err(Error::Config(format!("viscosity eps = {eps} must be positive")));
    }
    problem.flow.check_positive(grid)?;
    let (amax, bmax) = problem.transport_bounds(grid, eps);
    grid.check_cfl(amax, bmax)?;

    let mut snapshots = Vec::with_capacity(grid.nt + 1);
    let mut diagnostics = Vec::with_capacity(grid.nt);
    snapshots.push(initial_snapshot(problem, grid, eps)?);
    for n in 0..grid.nt {
        let (next, d) = step(&snapshots[n], n, problem, grid, eps, forcing, exec).map_err(|e| Error::Step {
            step: n + 1,
            source: Box::new(e),
        })?;
        snapshots.push(next);
        diagnostics.push(d);
    }
    Ok(FieldHistory {
        grid: *grid,
        eps,
        problem: problem.clone(),
        snapshots,
        diagnostics,
    })
}
