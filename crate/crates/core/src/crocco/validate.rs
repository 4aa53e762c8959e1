use std::fmt;

use super::flow::ExternalFlow;
use super::problem::ProblemData;
use crate::grid::GridSpec;

/// Structural hypothesis checked by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// U > 0
    PositiveOuterFlow,
    /// w0 > 0 and w1 > 0 below y = 1 (positivity plus the monotone class,
    /// since w = ∂y u / U in Crocco variables)
    PositiveProfiles,
    /// v0 ≤ 0
    Suction,
    /// ∂xP ≤ 0
    FavorablePressure,
    /// C0⁻¹(1 − y) < w0, w1 < C0(1 − y) for a finite C0
    LinearBound,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::PositiveOuterFlow => "U > 0",
            Condition::PositiveProfiles => "w0, w1 > 0 (monotone class)",
            Condition::Suction => "v_0 <= 0",
            Condition::FavorablePressure => "dxP <= 0 (favorable pressure)",
            Condition::LinearBound => "C0^-1 (1-y) < w < C0 (1-y)",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub condition: Condition,
    pub location: String,
    /// Signed amount by which the condition fails.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// First violation of each kind, in check order.
    pub violations: Vec<Violation>,
    /// Tightest empirical constant in the linear bound over the grid
    /// (row y = 1 excluded).
    pub c0: f64,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }
}

fn bound_ratio(w: f64, y: f64) -> f64 {
    let d = 1.0 - y;
    if !(w > 0.0) {
        return f64::INFINITY;
    }
    (w / d).max(d / w)
}

/// Checks the data hypotheses on the nodes of `grid` and, for the linear
/// bound, along a geometric approach to y = 1 so that an unbounded ratio is
/// caught independently of the grid.
pub fn validate(data: &ProblemData, flow: &ExternalFlow, grid: &GridSpec) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |condition, location: String, margin| {
        if !violations.iter().any(|v: &Violation| v.condition == condition) {
            violations.push(Violation {
                condition,
                location,
                margin,
            });
        }
    };

    for i in 0..=grid.nx {
        for n in 0..=grid.nt {
            let (x, t) = (grid.x(i), grid.t(n));
            let s = flow.eval(x, t);
            if !(s.u > 0.0) {
                push(Condition::PositiveOuterFlow, format!("(x, t) = ({x}, {t})"), s.u);
                continue;
            }
            let p = s.dx_p();
            if p > 0.0 {
                push(Condition::FavorablePressure, format!("(x, t) = ({x}, {t})"), p);
            }
            let v = (data.v0)(x, t);
            if v > 0.0 {
                push(Condition::Suction, format!("(x, t) = ({x}, {t})"), v);
            }
        }
    }

    let mut c0: f64 = 1.0;
    for j in 0..grid.ny {
        let y = grid.y(j);
        for i in 0..=grid.nx {
            let x = grid.x(i);
            let w = (data.w0)(x, y);
            if !(w > 0.0) {
                push(Condition::PositiveProfiles, format!("w0 at (x, y) = ({x}, {y})"), w);
            }
            c0 = c0.max(bound_ratio(w, y));
        }
        for n in 0..=grid.nt {
            let t = grid.t(n);
            let w = (data.w1)(y, t);
            if !(w > 0.0) {
                push(Condition::PositiveProfiles, format!("w1 at (y, t) = ({y}, {t})"), w);
            }
            c0 = c0.max(bound_ratio(w, y));
        }
    }
    if !c0.is_finite() {
        push(Condition::LinearBound, "grid nodes".into(), c0);
    }

    // Probe y = 1 − 2^-k: the ratio must stay bounded as k grows.
    let probes_x = [0.0, 0.5 * grid.length, grid.length];
    let probes_t = [0.0, 0.5 * grid.horizon, grid.horizon];
    let ratio_at = |k: i32, f: &dyn Fn(f64) -> f64| bound_ratio(f(1.0 - 2f64.powi(-k)), 1.0 - 2f64.powi(-k));
    let mut probe = |label: &str, f: &dyn Fn(f64) -> f64| {
        let mid = ratio_at(15, f);
        let far = ratio_at(30, f);
        if !(far <= 2.0 * mid) {
            push(
                Condition::LinearBound,
                format!("{label} as y -> 1 (ratio {mid:.3e} at 1-2^-15, {far:.3e} at 1-2^-30)"),
                far,
            );
        }
    };
    for &x in &probes_x {
        probe(&format!("w0 at x = {x}"), &|y| (data.w0)(x, y));
    }
    for &t in &probes_t {
        probe(&format!("w1 at t = {t}"), &|y| (data.w1)(y, t));
    }

    ValidationReport { violations, c0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(16, 16, 16, 1.0, 0.5).unwrap()
    }

    #[test]
    fn linear_profile_is_admissible() {
        let r = validate(&ProblemData::linear_profile(-1.0), &ExternalFlow::uniform(1.0, 0.5), &grid());
        assert!(r.is_empty(), "{:?}", r.violations);
        assert!((r.c0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_profile_is_admissible_at_every_resolution() {
        for n in [4, 7, 32, 100] {
            let g = GridSpec::new(n, n, n, 1.0, 0.5).unwrap();
            let r = validate(&ProblemData::linear_profile(-0.5), &ExternalFlow::accelerating(1.0, 0.5), &g);
            assert!(r.is_empty());
        }
    }

    #[test]
    fn injection_is_flagged() {
        let data = ProblemData::new(|_, y| 1.0 - y, |y, _| 1.0 - y, |x, _| if x > 0.5 { 0.1 } else { -1.0 });
        let r = validate(&data, &ExternalFlow::uniform(1.0, 0.5), &grid());
        assert!(r.has(Condition::Suction));
        assert_eq!(r.violations.len(), 1);
        assert!((r.violations[0].margin - 0.1).abs() < 1e-15);
    }

    #[test]
    fn quadratic_profile_fails_linear_bound() {
        let data = ProblemData::new(|_, y| (1.0 - y) * (1.0 - y), |y, _| 1.0 - y, |_, _| -1.0);
        let r = validate(&data, &ExternalFlow::uniform(1.0, 0.5), &grid());
        assert!(r.has(Condition::LinearBound));
        assert!(r.violations[0].location.contains("w0"));
    }

    #[test]
    fn adverse_pressure_is_flagged() {
        let r = validate(&ProblemData::linear_profile(-1.0), &ExternalFlow::decelerating(1.0, 0.5), &grid());
        assert!(r.has(Condition::FavorablePressure));
    }
}
