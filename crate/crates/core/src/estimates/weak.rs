use std::f64::consts::PI;

use super::{cell_gradient, cell_mean};
use crate::crocco::PointCoefficients;
use crate::solver::FieldHistory;

/// One term c·sin(πkx/L)(1−y)^m·t·(1 − (t/T)²/2).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Mode {
    coef: f64,
    k: f64,
    m: i32,
}

/// A finite combination of separable modes; each vanishes at t = 0, x = 0
/// and x = L by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    modes: Vec<Mode>,
}

/// (φ, φ_x, φ_y, φ_t) at a point.
pub type Jet = [f64; 4];

impl TestFunction {
    pub fn zero() -> Self {
        TestFunction { modes: Vec::new() }
    }

    pub fn mode(k: u32, m: u32) -> Self {
        TestFunction {
            modes: vec![Mode {
                coef: 1.0,
                k: k as f64,
                m: m as i32,
            }],
        }
    }

    pub fn scaled(mut self, s: f64) -> Self {
        for md in &mut self.modes {
            md.coef *= s;
        }
        self
    }

    pub fn plus(mut self, other: &TestFunction) -> Self {
        self.modes.extend_from_slice(&other.modes);
        self
    }

    pub fn eval(&self, x: f64, y: f64, t: f64, length: f64, horizon: f64) -> Jet {
        let s = t / horizon;
        let bump = t * (1.0 - 0.5 * s * s);
        let bump_t = 1.0 - 1.5 * s * s;
        let mut out = [0.0; 4];
        for md in &self.modes {
            let w = PI * md.k / length;
            let (sn, cs) = (w * x).sin_cos();
            let p = (1.0 - y).powi(md.m);
            let dp = if md.m == 0 { 0.0 } else { -(md.m as f64) * (1.0 - y).powi(md.m - 1) };
            out[0] += md.coef * sn * p * bump;
            out[1] += md.coef * w * cs * p * bump;
            out[2] += md.coef * sn * dp * bump;
            out[3] += md.coef * sn * p * bump_t;
        }
        out
    }
}

/// The fixed family sin(πkx/L)(1−y)^m t(1 − (t/T)²/2), k ∈ {1, 2},
/// m ∈ {0, 1, 2}.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunctionFamily {
    pub functions: Vec<TestFunction>,
}

impl Default for TestFunctionFamily {
    fn default() -> Self {
        let functions = [1, 2]
            .into_iter()
            .flat_map(|k| (0..3).map(move |m| TestFunction::mode(k, m)))
            .collect();
        TestFunctionFamily { functions }
    }
}

/// Result of [`weak_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeakResidual {
    /// max over time levels of |R_n(φ)|, per test function.
    pub per_function: Vec<f64>,
    pub max: f64,
}

/// Signed residual of the weak identity tested against φ with weight
/// ψ = (1−y)^α φ, for each time level t_n, n = 1..=Nt:
///
/// R_n = −∫u⁻¹ψ(t_n) + ∫₀^{t_n}∫[u⁻¹ψ_t + ψ_y u_y + u⁻¹(aψ)_x + u⁻¹(bψ)_y + c u⁻¹ψ]
///       + ∫₀^{t_n}∫ v0 φ(x, 0, t).
pub fn weak_residual_signed(h: &FieldHistory, phi: &TestFunction, alpha: f64) -> Vec<f64> {
    let g = &h.grid;
    let (dx, dy, dt) = (g.dx(), g.dy(), g.dt());
    let (l, tt) = (g.length, g.horizon);
    let flow = &h.problem.flow;
    let mut out = Vec::with_capacity(g.nt);
    let mut running = 0.0;
    for n in 0..g.nt {
        let tc = g.t(n) + 0.5 * dt;
        let (mut slab, mut wall) = (0.0, 0.0);
        for i in 0..g.nx {
            let xc = g.x(i) + 0.5 * dx;
            let s = flow.eval(xc, tc);
            for j in 0..g.ny {
                let yc = g.y(j) + 0.5 * dy;
                let k = PointCoefficients::from_flow(s, yc);
                let [f, fx, fy, ft] = phi.eval(xc, yc, tc, l, tt);
                let wgt = (1.0 - yc).powf(alpha);
                let wgt_y = -alpha * (1.0 - yc).powf(alpha - 1.0);
                let psi = wgt * f;
                let psi_x = wgt * fx;
                let psi_y = wgt_y * f + wgt * fy;
                let psi_t = wgt * ft;
                let inv = 1.0 / cell_mean(h, i, j, n);
                let uy = cell_gradient(h, i, j, n)[1];
                let a_psi_x = k.a_x * psi + k.a * psi_x;
                let b_psi_y = k.b_y * psi + k.b * psi_y;
                slab += inv * psi_t + psi_y * uy + inv * a_psi_x + inv * b_psi_y + k.c * inv * psi;
            }
            wall += h.problem.v0(xc, tc) * phi.eval(xc, 0.0, tc, l, tt)[0];
        }
        running += slab * dx * dy * dt + wall * dx * dt;

        let tn = g.t(n + 1);
        let snap = &h.snapshots[n + 1];
        let mut top = 0.0;
        for i in 0..g.nx {
            let xc = g.x(i) + 0.5 * dx;
            for j in 0..g.ny {
                let yc = g.y(j) + 0.5 * dy;
                let u = 0.25 * (snap.at(i, j) + snap.at(i + 1, j) + snap.at(i, j + 1) + snap.at(i + 1, j + 1));
                top += (1.0 - yc).powf(alpha) * phi.eval(xc, yc, tn, l, tt)[0] / u;
            }
        }
        out.push(running - top * dx * dy);
    }
    out
}

/// max over the family and over time levels of |R_n(φ)|.
pub fn weak_residual(h: &FieldHistory, family: &TestFunctionFamily, alpha: f64) -> WeakResidual {
    let per_function: Vec<f64> = family
        .functions
        .iter()
        .map(|phi| {
            weak_residual_signed(h, phi, alpha)
                .into_iter()
                .fold(0.0, |m: f64, r| m.max(r.abs()))
        })
        .collect();
    let max = per_function.iter().copied().fold(0.0, f64::max);
    WeakResidual { per_function, max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::tests::history_from;
    use crate::grid::GridSpec;

    #[test]
    fn test_functions_vanish_on_the_boundary() {
        let fam = TestFunctionFamily::default();
        assert_eq!(fam.functions.len(), 6);
        for phi in &fam.functions {
            for &(x, y, t) in &[(0.0, 0.3, 0.2), (2.0, 0.7, 0.4), (1.1, 0.2, 0.0)] {
                assert!(phi.eval(x, y, t, 2.0, 0.5)[0].abs() < 1e-15);
            }
        }
    }

    #[test]
    fn test_function_derivatives_match_differences() {
        let phi = TestFunction::mode(2, 2).plus(&TestFunction::mode(1, 1).scaled(-0.3));
        let (x, y, t, h) = (0.37, 0.41, 0.23, 1e-6);
        let e = |x, y, t| phi.eval(x, y, t, 1.0, 0.5)[0];
        let j = phi.eval(x, y, t, 1.0, 0.5);
        assert!((j[1] - (e(x + h, y, t) - e(x - h, y, t)) / (2.0 * h)).abs() < 1e-8);
        assert!((j[2] - (e(x, y + h, t) - e(x, y - h, t)) / (2.0 * h)).abs() < 1e-8);
        assert!((j[3] - (e(x, y, t + h) - e(x, y, t - h)) / (2.0 * h)).abs() < 1e-8);
    }

    #[test]
    fn zero_test_function_gives_zero() {
        let g = GridSpec::new(8, 8, 8, 1.0, 0.5).unwrap();
        let h = history_from(&g, |_, y, _| 1.0 - y);
        assert!(weak_residual_signed(&h, &TestFunction::zero(), 2.0).iter().all(|&r| r == 0.0));
    }

    #[test]
    fn stationary_profile_converges() {
        let fam = TestFunctionFamily::default();
        let r = |n: usize| {
            let g = GridSpec::new(n, n, n, 1.0, 0.5).unwrap();
            weak_residual(&history_from(&g, |_, y, _| 1.0 - y), &fam, 2.0).max
        };
        let (r1, r2) = (r(16), r(32));
        assert!(r1 < 1e-2, "{r1}");
        assert!(r1 / r2 > 1.8, "{r1} {r2}");
    }
}
