//! Measurements on model-problem fields: logarithmic subsolutions, the
//! mean value I₁ against the kernel, the weak Poincaré ratio, the density
//! estimate and oscillation decay.

use std::fmt::Write as _;

use super::cutoff::CutoffSpec;
use super::geometry::ParabolicBox;
use super::kernel::KernelPoint;
use super::rough::RoughField;
use crate::error::{Error, Result};
use crate::mms::fitted_order;
use crate::par::Execution;
use crate::quadrature::{composite, gauss_hermite, Rule};

/// The two logarithmic transforms of a supersolution u at level h.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogTransform {
    /// ln⁺(h / (h^{9/8} + u)), bounded by ln h^{−1/8}
    Shifted,
    /// ln⁺(1 / (u + h^{9/8})), bounded by ln h^{−9/8}
    Plain,
}

impl LogTransform {
    pub fn name(self) -> &'static str {
        match self {
            LogTransform::Shifted => "shifted",
            LogTransform::Plain => "plain",
        }
    }

    pub fn apply(self, u: f64, h: f64) -> f64 {
        let num = match self {
            LogTransform::Shifted => h,
            LogTransform::Plain => 1.0,
        };
        (num / (h.powf(1.125) + u)).ln().max(0.0)
    }

    /// Value of the transform at u = 0.
    pub fn upper_bound(self, h: f64) -> f64 {
        self.apply(0.0, h)
    }

    /// The u at which the transform drops to 0.
    pub fn threshold(self, h: f64) -> f64 {
        match self {
            LogTransform::Shifted => h - h.powf(1.125),
            LogTransform::Plain => 1.0 - h.powf(1.125),
        }
    }
}

/// Node-wise transform of a non-negative field.
pub fn log_subsolution(u: &RoughField, h: f64, transform: LogTransform) -> Result<RoughField> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::Parameter(format!("level h = {h} must lie in (0, 1/2)")));
    }
    if let Some(v) = u.values.iter().find(|&&v| !(v >= 0.0)) {
        return Err(Error::Parameter(format!("log transform needs u >= 0, found {v}")));
    }
    Ok(u.map(|v| transform.apply(v, h)))
}

/// Quadrature for I₁: Gauss–Hermite in the Gaussian coordinates of Γ₀ and
/// composite Gauss–Legendre in σ = √(t − τ).
#[derive(Debug, Clone)]
pub struct MeanValueRule {
    hermite: Rule,
    panels: usize,
    points: usize,
}

impl Default for MeanValueRule {
    fn default() -> Self {
        MeanValueRule {
            hermite: gauss_hermite(12),
            panels: 8,
            points: 6,
        }
    }
}

impl MeanValueRule {
    /// I₁(z) = ∫ Γ₀(z, ζ) [∂η log Γ₀ · ∂ηφ + (∂τ + η∂ξ)φ] w(ζ) dζ.
    ///
    /// With η = y + 2√s p and ξ = x − s(y+η)/2 − √(s³/3) q the kernel
    /// measure is e^{−p²−q²}/π and ∂η log Γ₀ = (√3 q − p)/√s; φ vanishes
    /// for τ ≤ −r²/6, so s runs over (0, t + r²/6).
    pub fn mean_value(&self, w: &impl Fn(KernelPoint) -> f64, spec: &CutoffSpec, z: KernelPoint) -> Result<f64> {
        let s_max = z.t + spec.r * spec.r / 6.0;
        if s_max <= 0.0 {
            return Ok(0.0);
        }
        // φ₀ starts to ramp down at τ ≈ −θr²/6; split there so every panel
        // sees a smooth integrand
        let s_ramp = (z.t + spec.theta * spec.r * spec.r / 6.0).max(0.0);
        let h = &self.hermite;
        let integrand = |sg: f64| {
            let s = sg * sg;
            let tau = z.t - s;
            let (a, b) = (2.0 * sg, (s * s * s / 3.0).sqrt());
            let mut acc = 0.0;
            for (&p, &wp) in h.nodes.iter().zip(&h.weights) {
                let eta = z.y + a * p;
                for (&q, &wq) in h.nodes.iter().zip(&h.weights) {
                    let xi = z.x - 0.5 * s * (z.y + eta) - b * q;
                    let zeta = KernelPoint::new(xi, eta, tau);
                    let jet = spec.phi(zeta);
                    // 2σ · ∂η log Γ₀ · ∂ηφ + 2σ (∂τ + η∂ξ)φ
                    let g = 2.0 * (3f64.sqrt() * q - p) * jet[2] + a * (jet[3] + eta * jet[1]);
                    if g != 0.0 {
                        acc += wp * wq * g * w(zeta);
                    }
                }
            }
            acc / std::f64::consts::PI
        };
        let total = composite(0.0, s_ramp.sqrt(), 2, self.points).integrate(integrand)
            + composite(s_ramp.sqrt(), s_max.sqrt(), self.panels, self.points).integrate(integrand);
        if !total.is_finite() {
            return Err(Error::Numerical(format!("mean value quadrature is not finite at {z:?}")));
        }
        Ok(total)
    }

    /// I₀ = max of I₁ over an n³ lattice of the closed box B⁻_{θr}.
    pub fn sup(&self, w: &(impl Fn(KernelPoint) -> f64 + Sync), spec: &CutoffSpec, n: usize, exec: Execution) -> Result<f64> {
        let pts = ParabolicBox::past(spec.theta * spec.r).lattice(n);
        let values = exec.map_slice(&pts, |&z| self.mean_value(w, spec, z));
        values
            .into_iter()
            .try_fold(f64::NEG_INFINITY, |m, v| v.map(|v| m.max(v)))
    }
}

/// Lattice size of the I₀ supremum.
pub const MEAN_VALUE_LATTICE: usize = 9;
/// Midpoints per axis for the box integrals.
pub const BOX_SAMPLES: usize = 33;

/// Outcome of the weak Poincaré comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PoincareOutcome {
    Ratio(f64),
    /// Both sides vanish.
    Vacuous,
    /// Positive left side against a vanishing gradient.
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareRatio {
    pub lhs: f64,
    pub rhs: f64,
    pub outcome: PoincareOutcome,
}

impl PoincareRatio {
    /// The ratio, with a vacuous comparison counting as 0.
    pub fn value(&self) -> Option<f64> {
        match self.outcome {
            PoincareOutcome::Ratio(r) => Some(r),
            PoincareOutcome::Vacuous => Some(0.0),
            PoincareOutcome::Violated => None,
        }
    }
}

fn box_integral(b: ParabolicBox, n: usize, f: impl Fn(KernelPoint) -> f64) -> f64 {
    let pts = b.midpoints(n);
    b.volume() * pts.iter().map(|&z| f(z)).sum::<f64>() / pts.len() as f64
}

/// ∫_{B⁻_{rθ}} ((w − I₀)⁺)² against θ²r² ∫_{B⁻_{r/θ}} |∂y w|², both by
/// the midpoint rule on `n`³ points.
pub fn weak_poincare_ratio(w: &RoughField, spec: &CutoffSpec, i0: f64, n: usize) -> Result<PoincareRatio> {
    let (r, th) = (spec.r, spec.theta);
    if r / th > 1.0 {
        return Err(Error::Parameter(format!("B-_(r/theta) with r/theta = {} leaves the unit box", r / th)));
    }
    let lhs = box_integral(ParabolicBox::past(r * th), n, |z| (w.sample(z) - i0).max(0.0).powi(2));
    let grad = box_integral(ParabolicBox::past(r / th), n, |z| w.sample_dy(z).powi(2));
    let rhs = th * th * r * r * grad;
    let outcome = match (lhs > 0.0, rhs > 0.0) {
        (_, true) => PoincareOutcome::Ratio(lhs / rhs),
        (false, false) => PoincareOutcome::Vacuous,
        (true, false) => PoincareOutcome::Violated,
    };
    Ok(PoincareRatio { lhs, rhs, outcome })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// One weak Poincaré measurement on a model-problem run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareMeasurement {
    /// Factor applied to u before the transform.
    pub scale: f64,
    pub i0: f64,
    /// I₀ / sup w.
    pub lambda0: f64,
    pub ratio: PoincareRatio,
}

/// Scales u so its median over B⁻_{r/θ} sits at the transform threshold
/// (half the box has w > 0), then measures I₀ and the Poincaré ratio.
pub fn poincare_measurement(
    u: &RoughField,
    spec: &CutoffSpec,
    h: f64,
    transform: LogTransform,
    exec: Execution,
) -> Result<PoincareMeasurement> {
    let outer = ParabolicBox::past(spec.r / spec.theta);
    let m = median(outer.midpoints(BOX_SAMPLES).iter().map(|&z| u.sample(z)).collect());
    if !(m > 0.0) {
        return Err(Error::Parameter(format!("median {m} of u over the outer box must be positive")));
    }
    let scale = transform.threshold(h) / m;
    let w = log_subsolution(&u.scaled(scale), h, transform)?;
    let i0 = MeanValueRule::default().sup(&|z| w.sample(z), spec, MEAN_VALUE_LATTICE, exec)?;
    let ratio = weak_poincare_ratio(&w, spec, i0, BOX_SAMPLES)?;
    Ok(PoincareMeasurement {
        scale,
        i0,
        lambda0: i0 / transform.upper_bound(h),
        ratio,
    })
}

/// Settings of the density measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySpec {
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub h1: f64,
}

impl Default for DensitySpec {
    fn default() -> Self {
        DensitySpec {
            r: 1.0,
            alpha: 0.05,
            beta: 0.9,
            h1: 0.01,
        }
    }
}

/// Required density fraction.
pub const DENSITY_FLOOR: f64 = 1.0 / 11.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRow {
    pub t: f64,
    pub h: f64,
    pub ratio: f64,
}

impl DensityRow {
    pub fn pass(&self) -> bool {
        self.ratio >= DENSITY_FLOOR
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    /// Sampled fraction of B_r⁻ where u ≥ 1.
    pub hypothesis_fraction: f64,
    pub rows: Vec<DensityRow>,
}

impl DensityReport {
    pub fn hypothesis_met(&self) -> bool {
        self.hypothesis_fraction >= 0.5
    }

    /// None when the hypothesis fails.
    pub fn passed(&self) -> Option<bool> {
        self.hypothesis_met().then(|| self.rows.iter().all(DensityRow::pass))
    }

    pub fn min_ratio(&self) -> Option<f64> {
        self.rows.iter().map(|r| r.ratio).reduce(f64::min)
    }

    pub fn to_csv(&self, header: &str) -> String {
        let mut s = format!("{header}\n");
        if !self.hypothesis_met() {
            let _ = writeln!(s, "# hypothesis not met: mes{{u>=1}} fraction {:.6}", self.hypothesis_fraction);
        }
        s.push_str("t,h,ratio,verdict\n");
        for r in &self.rows {
            let _ = writeln!(s, "{:.16e},{:.16e},{:.16e},{}", r.t, r.h, r.ratio, if r.pass() { "pass" } else { "fail" });
        }
        s
    }
}

/// Divides u by its median over B_r⁻ so that half the box has u ≥ 1. The
/// factor carries a 1e-9 relative margin so rounding in the interpolation
/// cannot push the median sample below 1.
pub fn normalize_for_density(u: &RoughField, r: f64) -> Result<(RoughField, f64)> {
    let m = median(ParabolicBox::past(r).midpoints(BOX_SAMPLES).iter().map(|&z| u.sample(z)).collect());
    if !(m > 0.0) {
        return Err(Error::Parameter(format!("median {m} of u over B-_r must be positive")));
    }
    let factor = (1.0 + 1e-9) / m;
    Ok((u.scaled(factor), factor))
}

/// mes{u(·, t) ≥ h} / mes C_{βr} for t = −αr²k/6, k = 1..5, and
/// h ∈ {h₁, h₁/2, h₁/4}, on a 65² midpoint lattice of C_{βr}. Rows are
/// left empty when mes{u ≥ 1} < ½ mes B_r⁻ on the 33³ sample.
pub fn density_ratio(u: &RoughField, spec: &DensitySpec) -> Result<DensityReport> {
    let DensitySpec { r, alpha, beta, h1 } = *spec;
    if !(r > 0.0 && r <= 1.0) || !(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta <= 1.0) || !(h1 > 0.0 && h1 <= 1.0) {
        return Err(Error::Parameter(format!("density settings {spec:?} out of range")));
    }
    let pts = ParabolicBox::past(r).midpoints(BOX_SAMPLES);
    let hits = pts.iter().filter(|&&z| u.sample(z) >= 1.0).count();
    let hypothesis_fraction = hits as f64 / pts.len() as f64;
    let mut rows = Vec::new();
    if hypothesis_fraction >= 0.5 {
        let slab = ParabolicBox::slab(beta * r).midpoints(65);
        for k in 1..=5 {
            let t = -alpha * r * r * k as f64 / 6.0;
            let vals: Vec<f64> = slab.iter().map(|z| u.sample(KernelPoint::new(z.x, z.y, t))).collect();
            for h in [h1, h1 / 2.0, h1 / 4.0] {
                let ratio = vals.iter().filter(|&&v| v >= h).count() as f64 / vals.len() as f64;
                rows.push(DensityRow { t, h, ratio });
            }
        }
    }
    Ok(DensityReport { hypothesis_fraction, rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationRow {
    pub r: f64,
    pub osc_small: f64,
    pub osc_big: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillationTable {
    pub theta_bar: f64,
    pub rows: Vec<OscillationRow>,
}

/// Closed-lattice points per axis for oscillation boxes.
pub const OSCILLATION_SAMPLES: usize = 17;

impl OscillationTable {
    /// Largest ratio over the table.
    pub fn beta_bar(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    /// Slope of log Osc(B⁻_r) against log r; None with fewer than two
    /// rows or a vanishing oscillation.
    pub fn holder_exponent(&self) -> Option<f64> {
        if self.rows.len() < 2 || self.rows.iter().any(|r| !(r.osc_big > 0.0)) {
            return None;
        }
        let r: Vec<f64> = self.rows.iter().map(|r| r.r).collect();
        let o: Vec<f64> = self.rows.iter().map(|r| r.osc_big).collect();
        Some(fitted_order(&r, &o))
    }

    pub fn to_csv(&self, header: &str) -> String {
        let mut s = format!("{header}\nr,osc_small,osc_big,ratio\n");
        for r in &self.rows {
            let _ = writeln!(s, "{:.16e},{:.16e},{:.16e},{:.16e}", r.r, r.osc_small, r.osc_big, r.ratio);
        }
        s
    }
}

fn oscillation(u: &RoughField, b: ParabolicBox) -> f64 {
    let (lo, hi) = b
        .lattice(OSCILLATION_SAMPLES)
        .iter()
        .map(|&z| u.sample(z))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

/// Osc over B⁻_{θ̄r} and B⁻_r for each r (max − min of trilinear samples
/// on a closed 17³ lattice); the ratio is 0 when Osc(B⁻_r) vanishes.
pub fn oscillation_table(u: &RoughField, theta_bar: f64, r_list: &[f64], exec: Execution) -> Result<OscillationTable> {
    if !(theta_bar > 0.0 && theta_bar < 1.0) {
        return Err(Error::Parameter(format!("theta_bar = {theta_bar} must lie in (0, 1)")));
    }
    if r_list.is_empty() || r_list.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
        return Err(Error::Parameter(format!("r_list {r_list:?} must be non-empty with entries in (0, 1]")));
    }
    let rows = exec.map_slice(r_list, |&r| {
        let osc_small = oscillation(u, ParabolicBox::past(theta_bar * r));
        let osc_big = oscillation(u, ParabolicBox::past(r));
        let ratio = if osc_big > 0.0 { osc_small / osc_big } else { 0.0 };
        OscillationRow { r, osc_small, osc_big, ratio }
    });
    Ok(OscillationTable { theta_bar, rows })
}

#[cfg(test)]
mod tests {
    use super::super::rough::RoughGrid;
    use super::*;

    fn grid() -> RoughGrid {
        RoughGrid::new(16).unwrap()
    }

    fn spec() -> CutoffSpec {
        CutoffSpec::new(0.01, 0.005, 0.05, 0.9).unwrap()
    }

    #[test]
    fn transform_examples() {
        let h = 0.25;
        let zero = RoughField::from_fn(grid(), |_, _, _| 0.0);
        let w = log_subsolution(&zero, h, LogTransform::Shifted).unwrap();
        assert!(w.values.iter().all(|&v| (v - (h / h.powf(1.125)).ln()).abs() < 1e-14));
        assert!((LogTransform::Shifted.upper_bound(h) - 0.125 * (1.0 / h).ln()).abs() < 1e-14);
        assert!((LogTransform::Plain.upper_bound(h) - 1.125 * (1.0 / h).ln()).abs() < 1e-14);
        assert_eq!(LogTransform::Shifted.apply(0.25, h), 0.0);
        let big = RoughField::from_fn(grid(), |x, _, _| h + x * x);
        assert!(log_subsolution(&big, h, LogTransform::Shifted).unwrap().values.iter().all(|&v| v == 0.0));
        assert_eq!(LogTransform::Shifted.apply(LogTransform::Shifted.threshold(h), h), 0.0);
        assert!(log_subsolution(&zero, 0.5, LogTransform::Shifted).is_err());
    }

    #[test]
    fn mean_value_of_constants() {
        let rule = MeanValueRule::default();
        let s = spec();
        let z = KernelPoint::new(0.0, 0.0, -0.5 * (s.theta * s.r).powi(2));
        assert_eq!(rule.mean_value(&|_| 0.0, &s, z).unwrap(), 0.0);
        let c = 0.7;
        let i1 = rule.mean_value(&|_| c, &s, z).unwrap();
        assert!((i1 - c).abs() < 1e-6 * c, "{i1:e}");
        let i0 = rule.sup(&|_| c, &s, 5, Execution::Parallel).unwrap();
        assert!((i0 - c).abs() < 1e-6 * c, "{i0}");
    }

    #[test]
    fn poincare_trivial_cases() {
        let s = spec();
        let zero = RoughField::from_fn(grid(), |_, _, _| 0.0);
        assert_eq!(weak_poincare_ratio(&zero, &s, 0.0, 9).unwrap().outcome, PoincareOutcome::Vacuous);
        let c = RoughField::from_fn(grid(), |_, _, _| 0.4);
        let p = weak_poincare_ratio(&c, &s, 0.4, 9).unwrap();
        assert_eq!(p.value(), Some(0.0));
        let p = weak_poincare_ratio(&c, &s, 0.1, 9).unwrap();
        assert_eq!(p.outcome, PoincareOutcome::Violated);
        let far = CutoffSpec::new(0.01, 0.5, 0.05, 0.9).unwrap();
        assert!(weak_poincare_ratio(&c, &far, 0.4, 9).is_err());
    }

    #[test]
    fn density_examples() {
        let one = RoughField::from_fn(grid(), |_, _, _| 1.0);
        let d = density_ratio(&one, &DensitySpec::default()).unwrap();
        assert_eq!(d.passed(), Some(true));
        assert_eq!(d.min_ratio(), Some(1.0));
        assert_eq!(d.rows.len(), 15);
        let zero = RoughField::from_fn(grid(), |_, _, _| 0.0);
        let d = density_ratio(&zero, &DensitySpec::default()).unwrap();
        assert_eq!(d.passed(), None);
        assert!(d.to_csv("#").contains("hypothesis not met"));
    }

    #[test]
    fn normalization_halves_the_box() {
        let u = RoughField::from_fn(grid(), |x, y, t| 2.0 + x + y - t);
        let (v, _) = normalize_for_density(&u, 1.0).unwrap();
        let d = density_ratio(&v, &DensitySpec::default()).unwrap();
        assert!(d.hypothesis_met() && d.hypothesis_fraction < 0.51);
    }

    #[test]
    fn oscillation_examples() {
        let exec = Execution::Sequential;
        let c = RoughField::from_fn(grid(), |_, _, _| 3.0);
        let t = oscillation_table(&c, 0.5, &[0.4, 0.2, 0.1], exec).unwrap();
        assert!(t.rows.iter().all(|r| r.ratio == 0.0 && r.osc_big == 0.0));
        assert_eq!(t.holder_exponent(), None);
        let lin = RoughField::from_fn(grid(), |_, y, _| 1.0 - y);
        let t = oscillation_table(&lin, 0.3, &[0.4, 0.2, 0.1], exec).unwrap();
        for r in &t.rows {
            assert!((r.osc_big - 2.0 * r.r).abs() < 1e-12);
            assert!((r.osc_small - 0.6 * r.r).abs() < 1e-12);
            assert!((r.ratio - 0.3).abs() < 1e-12);
        }
        assert!((t.holder_exponent().unwrap() - 1.0).abs() < 1e-10);
        assert!(oscillation_table(&lin, 0.3, &[], exec).is_err());
        assert!(oscillation_table(&lin, 1.3, &[0.4], exec).is_err());
    }
}
