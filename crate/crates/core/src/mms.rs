//! Manufactured solutions for the regularized problem.
//!
//! A smooth u* is substituted into the equation to build the forcing and
//! boundary data that make it an exact solution; comparing the scheme's
//! output against u* under refinement measures the order of accuracy in
//! each direction separately.

use crate::crocco::{CroccoProblem, ExternalFlow, PointCoefficients, ProblemData};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::par::Execution;
use crate::solver::{solve, Forcing};

type Field = fn(f64, f64, f64) -> f64;

/// u* with its derivatives, written out by hand.
#[derive(Clone, Copy)]
pub struct Exact {
    pub u: Field,
    pub u_t: Field,
    pub u_x: Field,
    pub u_y: Field,
    pub u_yy: Field,
}

#[derive(Clone)]
pub struct Manufactured {
    pub name: &'static str,
    pub exact: Exact,
    pub flow: ExternalFlow,
}

/// Which grid spacing a study refines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    Y,
    T,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::X => "dx",
            Direction::Y => "dy",
            Direction::T => "dt",
        }
    }
}

impl Manufactured {
    /// (1−y)(1+t/4) with U ≡ 1; the scheme reproduces it to rounding.
    pub fn linear(length: f64, horizon: f64) -> Self {
        Manufactured {
            name: "linear",
            exact: Exact {
                u: |_, y, t| (1.0 - y) * (1.0 + 0.25 * t),
                u_t: |_, y, _| 0.25 * (1.0 - y),
                u_x: |_, _, _| 0.0,
                u_y: |_, _, t| -(1.0 + 0.25 * t),
                u_yy: |_, _, _| 0.0,
            },
            flow: ExternalFlow::uniform(length, horizon),
        }
    }

    /// Steady, x-independent cos(πy/2): only the y-discretization errs.
    pub fn cosine_profile(length: f64, horizon: f64) -> Self {
        use std::f64::consts::FRAC_PI_2 as H;
        Manufactured {
            name: "cosine-profile",
            exact: Exact {
                u: |_, y, _| (H * y).cos(),
                u_t: |_, _, _| 0.0,
                u_x: |_, _, _| 0.0,
                u_y: |_, y, _| -H * (H * y).sin(),
                u_yy: |_, y, _| -H * H * (H * y).cos(),
            },
            flow: ExternalFlow::uniform(length, horizon),
        }
    }

    /// Steady (1−y)(1+x/2)²: linear in y, so only the x-transport errs.
    pub fn streamwise_growth(length: f64, horizon: f64) -> Self {
        Manufactured {
            name: "streamwise-growth",
            exact: Exact {
                u: |x, y, _| (1.0 - y) * (1.0 + 0.5 * x).powi(2),
                u_t: |_, _, _| 0.0,
                u_x: |x, y, _| (1.0 - y) * (1.0 + 0.5 * x),
                u_y: |x, _, _| -(1.0 + 0.5 * x).powi(2),
                u_yy: |_, _, _| 0.0,
            },
            flow: ExternalFlow::uniform(length, horizon),
        }
    }

    /// (1−y)(1+sin 2t) under the accelerating stream U = 1+t, where the
    /// reaction and y-drift are active; linear in y and x-independent.
    pub fn pulsating(length: f64, horizon: f64) -> Self {
        Manufactured {
            name: "pulsating",
            exact: Exact {
                u: |_, y, t| (1.0 - y) * (1.0 + (2.0 * t).sin()),
                u_t: |_, y, t| 2.0 * (1.0 - y) * (2.0 * t).cos(),
                u_x: |_, _, _| 0.0,
                u_y: |_, _, t| -(1.0 + (2.0 * t).sin()),
                u_yy: |_, _, _| 0.0,
            },
            flow: ExternalFlow::accelerating(length, horizon),
        }
    }

    /// The manufactured right-hand side of the regularized equation.
    pub fn forcing_value(&self, eps: f64, x: f64, y: f64, t: f64) -> f64 {
        let e = &self.exact;
        let k = PointCoefficients::from_flow(self.flow.eval(x, t), y);
        let u = (e.u)(x, y, t);
        (e.u_t)(x, y, t) - (u + eps).powi(2) * (e.u_yy)(x, y, t)
            + (k.a + eps) * (e.u_x)(x, y, t)
            + k.b * (e.u_y)(x, y, t)
            + k.c * u
    }

    pub fn forcing(&self, eps: f64) -> Forcing {
        let m = self.clone();
        Forcing::new(move |x, y, t| m.forcing_value(eps, x, y, t))
    }

    /// Suction making u* satisfy the regularized wall condition.
    pub fn suction(&self, eps: f64, x: f64, t: f64) -> f64 {
        let e = &self.exact;
        let px = self.flow.eval(x, t).px_over_u();
        (e.u_y)(x, 0.0, t) - px / ((e.u)(x, 0.0, t) + eps)
    }

    pub fn problem(&self, eps: f64) -> CroccoProblem {
        let e = self.exact;
        let m = self.clone();
        CroccoProblem::new(
            self.flow.clone(),
            ProblemData::new(
                move |x, y| (e.u)(x, y, 0.0),
                move |y, t| (e.u)(0.0, y, t),
                move |x, t| m.suction(eps, x, t),
            ),
        )
    }

    /// Max-norm error of the scheme against u* over every node of Q_T.
    pub fn error(&self, grid: &GridSpec, eps: f64, exec: Execution) -> Result<f64> {
        let h = solve(&self.problem(eps), grid, eps, &self.forcing(eps), exec)?;
        let u = self.exact.u;
        Ok(h.max_deviation(u))
    }
}

/// Errors on a refinement ladder and the fitted order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStudy {
    pub solution: &'static str,
    pub direction: Direction,
    pub spacings: Vec<f64>,
    pub errors: Vec<f64>,
    pub order: f64,
}

/// Least-squares slope of log(error) against log(h).
pub fn fitted_order(h: &[f64], err: &[f64]) -> f64 {
    let n = h.len() as f64;
    let lx: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Refines `direction` from `base` over `levels` halvings (counts double),
/// holding the other two spacings fixed.
pub fn order_study(
    m: &Manufactured,
    base: &GridSpec,
    direction: Direction,
    levels: usize,
    eps: f64,
    exec: Execution,
) -> Result<OrderStudy> {
    let mut spacings = Vec::with_capacity(levels);
    let mut errors = Vec::with_capacity(levels);
    let mut g = *base;
    for _ in 0..levels {
        let (h, _) = match direction {
            Direction::X => (g.dx(), ()),
            Direction::Y => (g.dy(), ()),
            Direction::T => (g.dt(), ()),
        };
        spacings.push(h);
        errors.push(m.error(&g, eps, exec)?);
        match direction {
            Direction::X => g.nx *= 2,
            Direction::Y => g.ny *= 2,
            Direction::T => g.nt *= 2,
        }
    }
    let order = fitted_order(&spacings, &errors);
    Ok(OrderStudy {
        solution: m.name,
        direction,
        spacings,
        errors,
        order,
    })
}

/// The three standard studies: y on the cosine profile, x on streamwise
/// growth, t on the pulsating profile, each over three levels.
pub fn standard_studies(eps: f64, exec: Execution) -> Result<Vec<OrderStudy>> {
    let (l, t) = (1.0, 0.5);
    let runs = [
        (Manufactured::cosine_profile(l, t), GridSpec::new(4, 64, 16, l, t)?, Direction::Y),
        (Manufactured::streamwise_growth(l, t), GridSpec::new(16, 8, 64, l, t)?, Direction::X),
        (Manufactured::pulsating(l, t), GridSpec::new(4, 8, 16, l, t)?, Direction::T),
    ];
    exec.map_slice(&runs, |(m, g, d)| order_study(m, g, *d, 3, eps, exec))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(m: &Manufactured) {
        let e = &m.exact;
        let h = 1e-5;
        for &(x, y, t) in &[(0.3, 0.2, 0.1), (0.7, 0.6, 0.4), (0.1, 0.9, 0.25)] {
            let ut = ((e.u)(x, y, t + h) - (e.u)(x, y, t - h)) / (2.0 * h);
            let ux = ((e.u)(x + h, y, t) - (e.u)(x - h, y, t)) / (2.0 * h);
            let uy = ((e.u)(x, y + h, t) - (e.u)(x, y - h, t)) / (2.0 * h);
            let uyy = ((e.u)(x, y + h, t) - 2.0 * (e.u)(x, y, t) + (e.u)(x, y - h, t)) / (h * h);
            assert!((ut - (e.u_t)(x, y, t)).abs() < 1e-8, "{} u_t", m.name);
            assert!((ux - (e.u_x)(x, y, t)).abs() < 1e-8, "{} u_x", m.name);
            assert!((uy - (e.u_y)(x, y, t)).abs() < 1e-8, "{} u_y", m.name);
            assert!((uyy - (e.u_yy)(x, y, t)).abs() < 1e-4, "{} u_yy", m.name);
            assert!((e.u)(x, 1.0, t).abs() < 1e-15);
        }
    }

    #[test]
    fn hand_derivatives_match_differences() {
        for m in [
            Manufactured::linear(1.0, 0.5),
            Manufactured::cosine_profile(1.0, 0.5),
            Manufactured::streamwise_growth(1.0, 0.5),
            Manufactured::pulsating(1.0, 0.5),
        ] {
            fd_check(&m);
        }
    }

    #[test]
    fn linear_solution_is_reproduced() {
        let m = Manufactured::linear(1.0, 0.5);
        let g = GridSpec::new(16, 16, 16, 1.0, 0.5).unwrap();
        let err = m.error(&g, 1e-3, Execution::Sequential).unwrap();
        assert!(err <= 1e-12, "{err}");
    }

    #[test]
    fn fitted_order_of_exact_powers() {
        let h = [0.1, 0.05, 0.025];
        let e: Vec<f64> = h.iter().map(|v: &f64| 3.0 * v.powi(2)).collect();
        assert!((fitted_order(&h, &e) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn wall_condition_holds_for_manufactured_suction() {
        let m = Manufactured::pulsating(1.0, 0.5);
        let eps = 1e-2;
        for &(x, t) in &[(0.2, 0.1), (0.8, 0.45)] {
            let u = (m.exact.u)(x, 0.0, t);
            let s = m.flow.eval(x, t);
            let lhs = (u + eps) * (m.exact.u_y)(x, 0.0, t);
            let rhs = m.suction(eps, x, t) * (u + eps) + s.px_over_u();
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }
}
