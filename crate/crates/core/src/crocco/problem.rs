use std::fmt;
use std::sync::Arc;

use super::flow::{ExternalFlow, FlowSample, ScalarFn};
use crate::error::Result;
use crate::grid::GridSpec;

/// Initial, inflow and suction data of the Crocco-variable problem:
/// `w0(x, y)` at t = 0, `w1(y, t)` at x = 0 and `v0(x, t)` at the wall.
#[derive(Clone)]
pub struct ProblemData {
    pub w0: ScalarFn,
    pub w1: ScalarFn,
    pub v0: ScalarFn,
}

impl fmt::Debug for ProblemData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ProblemData { .. }")
    }
}

impl ProblemData {
    pub fn new(
        w0: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        w1: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        v0: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ProblemData {
            w0: Arc::new(w0),
            w1: Arc::new(w1),
            v0: Arc::new(v0),
        }
    }

    /// w0 = w1 = 1 − y with constant suction `v0`.
    pub fn linear_profile(v0: f64) -> Self {
        Self::new(|_, y| 1.0 - y, |y, _| 1.0 - y, move |_, _| v0)
    }
}

/// Coefficients of the regularized equation at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCoefficients {
    /// a = y U
    pub a: f64,
    /// b = (1 − y²) ∂xU + (1 − y) ∂tU / U
    pub b: f64,
    /// c = (1 − y) ∂xU − ∂xP / U
    pub c: f64,
    /// B = y ∂xU + ∂tU / U, the alternative reaction coefficient of the
    /// unsimplified transformed equation; reported, never used.
    pub c_alt: f64,
    /// ∂xP / U
    pub px_over_u: f64,
    /// ∂a/∂x = y ∂xU
    pub a_x: f64,
    /// ∂b/∂y = −2y ∂xU − ∂tU / U
    pub b_y: f64,
}

impl PointCoefficients {
    pub fn from_flow(s: FlowSample, y: f64) -> Self {
        let ut = s.dt_u / s.u;
        let px_over_u = s.px_over_u();
        PointCoefficients {
            a: y * s.u,
            b: (1.0 - y * y) * s.dx_u + (1.0 - y) * ut,
            c: (1.0 - y) * s.dx_u - px_over_u,
            c_alt: y * s.dx_u + ut,
            px_over_u,
            a_x: y * s.dx_u,
            b_y: -2.0 * y * s.dx_u - ut,
        }
    }
}

/// Complete input of the solver: outer flow plus data.
#[derive(Clone, Debug)]
pub struct CroccoProblem {
    pub flow: ExternalFlow,
    pub data: ProblemData,
}

impl CroccoProblem {
    pub fn new(flow: ExternalFlow, data: ProblemData) -> Self {
        CroccoProblem { flow, data }
    }

    pub fn coefficients_at(&self, x: f64, y: f64, t: f64) -> PointCoefficients {
        PointCoefficients::from_flow(self.flow.eval(x, t), y)
    }

    pub fn w0(&self, x: f64, y: f64) -> f64 {
        (self.data.w0)(x, y)
    }
    pub fn w1(&self, y: f64, t: f64) -> f64 {
        (self.data.w1)(y, t)
    }
    pub fn v0(&self, x: f64, t: f64) -> f64 {
        (self.data.v0)(x, t)
    }

    /// Largest a + ε and |b| over the grid nodes (for the CFL check).
    pub fn transport_bounds(&self, grid: &GridSpec, eps: f64) -> (f64, f64) {
        let mut amax: f64 = 0.0;
        let mut bmax: f64 = 0.0;
        for i in 0..=grid.nx {
            for n in 0..=grid.nt {
                let s = self.flow.eval(grid.x(i), grid.t(n));
                for j in 0..=grid.ny {
                    let k = PointCoefficients::from_flow(s, grid.y(j));
                    amax = amax.max(k.a + eps);
                    bmax = bmax.max(k.b.abs());
                }
            }
        }
        (amax, bmax)
    }
}

/// a, b, c sampled at every grid node; layout `[(n * (nx+1) + i) * (ny+1) + j]`.
#[derive(Debug, Clone)]
pub struct CoefficientFields {
    pub grid: GridSpec,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub c_alt: Vec<f64>,
    /// ∂xP/U at `(n * (nx+1) + i)`.
    pub px_over_u: Vec<f64>,
}

impl CoefficientFields {
    pub fn index(&self, i: usize, j: usize, n: usize) -> usize {
        (n * (self.grid.nx + 1) + i) * (self.grid.ny + 1) + j
    }

    /// max |b(x, 0, t) + ∂xP/U| over the wall nodes (the Bernoulli identity).
    pub fn wall_identity_defect(&self) -> f64 {
        let g = &self.grid;
        let mut worst: f64 = 0.0;
        for n in 0..=g.nt {
            for i in 0..=g.nx {
                let b0 = self.b[self.index(i, 0, n)];
                worst = worst.max((b0 + self.px_over_u[n * (g.nx + 1) + i]).abs());
            }
        }
        worst
    }

    /// max |c − B| between the two reaction-coefficient forms.
    pub fn reaction_form_gap(&self) -> f64 {
        self.c
            .iter()
            .zip(&self.c_alt)
            .map(|(c, b)| (c - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Samples a, b, c on every node of `grid`.
pub fn coefficients(flow: &ExternalFlow, grid: &GridSpec) -> Result<CoefficientFields> {
    flow.check_positive(grid)?;
    let size = (grid.nt + 1) * grid.nodes_per_snapshot();
    let mut f = CoefficientFields {
        grid: *grid,
        a: Vec::with_capacity(size),
        b: Vec::with_capacity(size),
        c: Vec::with_capacity(size),
        c_alt: Vec::with_capacity(size),
        px_over_u: Vec::with_capacity((grid.nt + 1) * (grid.nx + 1)),
    };
    for n in 0..=grid.nt {
        for i in 0..=grid.nx {
            let s = flow.eval(grid.x(i), grid.t(n));
            f.px_over_u.push(s.px_over_u());
            for j in 0..=grid.ny {
                let k = PointCoefficients::from_flow(s, grid.y(j));
                f.a.push(k.a);
                f.b.push(k.b);
                f.c.push(k.c);
                f.c_alt.push(k.c_alt);
            }
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_flow_reduces_to_model_equation() {
        let g = GridSpec::new(4, 4, 4, 1.0, 1.0).unwrap();
        let f = coefficients(&ExternalFlow::uniform(1.0, 1.0), &g).unwrap();
        for n in 0..=g.nt {
            for i in 0..=g.nx {
                for j in 0..=g.ny {
                    let k = f.index(i, j, n);
                    assert_eq!(f.a[k], g.y(j));
                    assert_eq!(f.b[k], 0.0);
                    assert_eq!(f.c[k], 0.0);
                }
            }
        }
    }

    #[test]
    fn accelerating_hand_values() {
        let flow = ExternalFlow::accelerating(1.0, 1.0);
        for t in [0.0, 0.3, 1.0] {
            let k = PointCoefficients::from_flow(flow.eval(0.5, t), 0.5);
            assert!((k.a - 0.5 * (1.0 + t)).abs() < 1e-15);
            assert!((k.b - 0.5 / (1.0 + t)).abs() < 1e-15);
            assert!((k.c - 1.0 / (1.0 + t)).abs() < 1e-15);
        }
    }

    #[test]
    fn b_vanishes_at_top_and_matches_bernoulli_at_wall() {
        let g = GridSpec::new(6, 6, 6, 1.0, 1.0).unwrap();
        let flow = ExternalFlow::analytic(
            Arc::new(|x, t| 1.0 + 0.3 * x + 0.2 * t * t),
            Arc::new(|_, _| 0.3),
            Arc::new(|_, t| 0.4 * t),
            1.0,
            1.0,
        );
        let f = coefficients(&flow, &g).unwrap();
        for n in 0..=g.nt {
            for i in 0..=g.nx {
                assert_eq!(f.b[f.index(i, g.ny, n)], 0.0);
            }
        }
        assert!(f.wall_identity_defect() < 1e-14);
        assert!(f.reaction_form_gap() > 0.0);
    }
}
