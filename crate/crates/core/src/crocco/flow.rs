use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::table::Table2;

/// Thread-safe scalar function of two variables.
pub type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// U and its first derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSample {
    pub u: f64,
    pub dx_u: f64,
    pub dt_u: f64,
}

impl FlowSample {
    /// Bernoulli: ∂xP = −(∂tU + U ∂xU).
    pub fn dx_p(&self) -> f64 {
        -(self.dt_u + self.u * self.dx_u)
    }

    pub fn px_over_u(&self) -> f64 {
        self.dx_p() / self.u
    }
}

#[derive(Clone)]
enum Profile {
    /// U ≡ 1
    Uniform,
    /// U = 1 + t
    Accelerating,
    /// U = 1 − x/4
    Decelerating,
    Analytic {
        u: ScalarFn,
        dx_u: ScalarFn,
        dt_u: ScalarFn,
    },
    Table {
        u: Table2,
        dx_u: Table2,
        dt_u: Table2,
    },
}

/// The outer Euler trace U(x, t) on [0, L]×[0, T].
#[derive(Clone)]
pub struct ExternalFlow {
    profile: Profile,
    name: String,
    pub length: f64,
    pub horizon: f64,
}

impl fmt::Debug for ExternalFlow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExternalFlow")
            .field("name", &self.name)
            .field("length", &self.length)
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl ExternalFlow {
    pub const BUILTINS: [&'static str; 3] = ["uniform", "accelerating", "decelerating"];

    pub fn uniform(length: f64, horizon: f64) -> Self {
        Self::with(Profile::Uniform, "uniform", length, horizon)
    }

    pub fn accelerating(length: f64, horizon: f64) -> Self {
        Self::with(Profile::Accelerating, "accelerating", length, horizon)
    }

    pub fn decelerating(length: f64, horizon: f64) -> Self {
        Self::with(Profile::Decelerating, "decelerating", length, horizon)
    }

    /// Looks up one of the analytic built-ins by name.
    pub fn builtin(name: &str, length: f64, horizon: f64) -> Result<Self> {
        match name {
            "uniform" => Ok(Self::uniform(length, horizon)),
            "accelerating" => Ok(Self::accelerating(length, horizon)),
            "decelerating" => Ok(Self::decelerating(length, horizon)),
            other => Err(Error::Config(format!(
                "unknown flow `{other}` (expected one of uniform, accelerating, decelerating, custom-table)"
            ))),
        }
    }

    /// Analytic flow with user-supplied derivatives.
    pub fn analytic(u: ScalarFn, dx_u: ScalarFn, dt_u: ScalarFn, length: f64, horizon: f64) -> Self {
        Self::with(Profile::Analytic { u, dx_u, dt_u }, "analytic", length, horizon)
    }

    /// Flow from U samples only; derivatives come from second-order
    /// differences of the table (one-sided at the ends).
    pub fn from_table(u: Table2, length: f64, horizon: f64) -> Result<Self> {
        if let Some(k) = u.values.iter().position(|&v| !(v > 0.0)) {
            let nb = u.second.len();
            return Err(Error::Validation {
                location: format!("(x, t) = ({}, {})", u.first[k / nb], u.second[k % nb]),
                message: format!("U = {} must be positive", u.values[k]),
            });
        }
        let dx_u = u.derivative(0);
        let dt_u = u.derivative(1);
        Ok(Self::with(Profile::Table { u, dx_u, dt_u }, "custom-table", length, horizon))
    }

    fn with(profile: Profile, name: &str, length: f64, horizon: f64) -> Self {
        ExternalFlow {
            profile,
            name: name.to_string(),
            length,
            horizon,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64, t: f64) -> FlowSample {
        match &self.profile {
            Profile::Uniform => FlowSample {
                u: 1.0,
                dx_u: 0.0,
                dt_u: 0.0,
            },
            Profile::Accelerating => FlowSample {
                u: 1.0 + t,
                dx_u: 0.0,
                dt_u: 1.0,
            },
            Profile::Decelerating => FlowSample {
                u: 1.0 - 0.25 * x,
                dx_u: -0.25,
                dt_u: 0.0,
            },
            Profile::Analytic { u, dx_u, dt_u } => FlowSample {
                u: u(x, t),
                dx_u: dx_u(x, t),
                dt_u: dt_u(x, t),
            },
            Profile::Table { u, dx_u, dt_u } => FlowSample {
                u: u.eval(x, t),
                dx_u: dx_u.eval(x, t),
                dt_u: dt_u.eval(x, t),
            },
        }
    }

    /// Fails on the first grid sample with U ≤ 0.
    pub fn check_positive(&self, grid: &GridSpec) -> Result<()> {
        for i in 0..=grid.nx {
            for n in 0..=grid.nt {
                let (x, t) = (grid.x(i), grid.t(n));
                let u = self.eval(x, t).u;
                if !(u > 0.0) {
                    return Err(Error::Validation {
                        location: format!("(x, t) = ({x}, {t})"),
                        message: format!("U = {u} must be positive"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Largest mismatch between the stored derivatives and centred
    /// differences of U with step `h`; O(h²) for consistent data.
    pub fn derivative_defect(&self, grid: &GridSpec, h: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..=grid.nx {
            for n in 0..=grid.nt {
                let (x, t) = (grid.x(i), grid.t(n));
                let s = self.eval(x, t);
                let fx = (self.eval(x + h, t).u - self.eval(x - h, t).u) / (2.0 * h);
                let ft = (self.eval(x, t + h).u - self.eval(x, t - h).u) / (2.0 * h);
                worst = worst.max((fx - s.dx_u).abs()).max((ft - s.dt_u).abs());
            }
        }
        worst
    }
}

/// ∂xP sampled at the grid's (x_i, t_n) nodes; `values[i * (nt+1) + n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureGradient {
    pub nx: usize,
    pub nt: usize,
    pub values: Vec<f64>,
    /// ∂xP ≤ 0 at every sample.
    pub favorable: bool,
}

impl PressureGradient {
    pub fn at(&self, i: usize, n: usize) -> f64 {
        self.values[i * (self.nt + 1) + n]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Bernoulli pressure gradient at every (x, t) node of `grid`.
pub fn pressure_gradient(flow: &ExternalFlow, grid: &GridSpec) -> Result<PressureGradient> {
    flow.check_positive(grid)?;
    let mut values = Vec::with_capacity((grid.nx + 1) * (grid.nt + 1));
    for i in 0..=grid.nx {
        for n in 0..=grid.nt {
            values.push(flow.eval(grid.x(i), grid.t(n)).dx_p());
        }
    }
    let favorable = values.iter().all(|&p| p <= 0.0);
    Ok(PressureGradient {
        nx: grid.nx,
        nt: grid.nt,
        values,
        favorable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(8, 8, 8, 1.0, 1.0).unwrap()
    }

    #[test]
    fn uniform_flow_has_zero_gradient() {
        let p = pressure_gradient(&ExternalFlow::uniform(1.0, 1.0), &grid()).unwrap();
        assert!(p.values.iter().all(|&v| v == 0.0));
        assert!(p.favorable);
    }

    #[test]
    fn accelerating_flow() {
        let p = pressure_gradient(&ExternalFlow::accelerating(1.0, 1.0), &grid()).unwrap();
        assert!(p.values.iter().all(|&v| v == -1.0));
        assert!(p.favorable);
    }

    #[test]
    fn decelerating_flow_is_adverse() {
        let g = grid();
        let p = pressure_gradient(&ExternalFlow::decelerating(1.0, 1.0), &g).unwrap();
        for i in 0..=g.nx {
            let x = g.x(i);
            assert!((p.at(i, 3) - (1.0 - x / 4.0) / 4.0).abs() < 1e-15);
        }
        assert!(!p.favorable);
    }

    #[test]
    fn non_positive_u_is_rejected_with_location() {
        let flow = ExternalFlow::analytic(
            Arc::new(|x, _| 0.5 - x),
            Arc::new(|_, _| -1.0),
            Arc::new(|_, _| 0.0),
            1.0,
            1.0,
        );
        match pressure_gradient(&flow, &grid()) {
            Err(Error::Validation { location, .. }) => assert!(location.contains("0.5")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn table_flow_derivatives_match_analytic() {
        let xs: Vec<f64> = (0..=32).map(|k| k as f64 / 32.0).collect();
        let ts: Vec<f64> = (0..=32).map(|k| k as f64 / 32.0).collect();
        let tab = Table2::from_fn(xs, ts, |x, t| (1.0 + t) * (1.0 + 0.3 * x * x));
        let flow = ExternalFlow::from_table(tab, 1.0, 1.0).unwrap();
        let s = flow.eval(0.5, 0.5);
        assert!((s.dx_u - 1.5 * 0.3).abs() < 1e-10);
        assert!((s.dt_u - 1.075).abs() < 1e-10);
    }

    #[test]
    fn favorable_flag_is_sampling_invariant() {
        for flow in [ExternalFlow::accelerating(1.0, 1.0), ExternalFlow::decelerating(1.0, 1.0)] {
            let a = pressure_gradient(&flow, &GridSpec::new(4, 4, 4, 1.0, 1.0).unwrap()).unwrap();
            let b = pressure_gradient(&flow, &GridSpec::new(40, 4, 17, 1.0, 1.0).unwrap()).unwrap();
            assert_eq!(a.favorable, b.favorable);
        }
    }

    #[test]
    fn analytic_derivative_consistency() {
        let flow = ExternalFlow::analytic(
            Arc::new(|x, t| 1.0 + 0.2 * (x + t).sin()),
            Arc::new(|x, t| 0.2 * (x + t).cos()),
            Arc::new(|x, t| 0.2 * (x + t).cos()),
            1.0,
            1.0,
        );
        let g = grid();
        let d1 = flow.derivative_defect(&g, 1e-2);
        let d2 = flow.derivative_defect(&g, 5e-3);
        assert!(d1 < 1e-5);
        assert!(d1 / d2 > 3.5);
    }
}
