use std::fmt;

use super::geometry::ParabolicBox;
use super::kernel::KernelPoint;
use crate::error::{Error, Result};

/// Cut-off construction parameters. θ ∈ (0, 2⁻⁶), r ∈ (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub theta: f64,
    pub r: f64,
    /// Depth of the slab on which φ must stay positive, in (θ, min(α, 1/12)).
    pub alpha1: f64,
    /// Slab width factor β of C_{βr}.
    pub beta: f64,
}

/// Values and first derivatives (f, f_x, f_y, f_t).
pub type Jet = [f64; 4];

impl CutoffSpec {
    /// α₁ defaults to the midpoint of (θ, min(α, 1/12)).
    pub fn new(theta: f64, r: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0 / 64.0) {
            return Err(Error::Parameter(format!("theta = {theta} must lie in (0, 1/64)")));
        }
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::Parameter(format!("r = {r} must lie in (0, 1]")));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::Parameter(format!("beta = {beta} must lie in (0, 1)")));
        }
        let upper = alpha.min(1.0 / 12.0);
        if !(upper > theta) {
            return Err(Error::Parameter(format!(
                "min(alpha, 1/12) = {upper} must exceed theta = {theta}"
            )));
        }
        Ok(CutoffSpec {
            theta,
            r,
            alpha1: 0.5 * (theta + upper),
            beta,
        })
    }

    /// Start of the ramp, θ^{1/6} r.
    pub fn inner(&self) -> f64 {
        self.theta.powf(1.0 / 6.0) * self.r
    }

    /// Bound on |χ'|: 2/((1 − θ^{1/6}) r).
    pub fn slope_bound(&self) -> f64 {
        2.0 / ((1.0 - self.theta.powf(1.0 / 6.0)) * self.r)
    }

    /// (χ, χ', χ'') at s ≥ 0: 1 up to θ^{1/6}r, 0 from r on, and a
    /// quintic smoothstep in between (|χ'| ≤ 1.875 / ramp width).
    pub fn chi(&self, s: f64) -> [f64; 3] {
        let (a, b) = (self.inner(), self.r);
        if s <= a {
            return [1.0, 0.0, 0.0];
        }
        if s >= b {
            return [0.0, 0.0, 0.0];
        }
        let w = b - a;
        let u = (s - a) / w;
        let step = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
        let d = 30.0 * u * u * (1.0 - u) * (1.0 - u);
        let dd = 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
        [1.0 - step, -d / w, -dd / (w * w)]
    }

    fn profile(&self, x: f64, t: f64) -> f64 {
        let r4 = self.r.powi(4);
        (self.theta * self.theta * x * x - 6.0 * t * r4).max(0.0).powf(1.0 / 6.0)
    }

    /// φ₀ = χ((θ²x² − 6t r⁴)^{1/6}) with its derivatives.
    pub fn phi0(&self, x: f64, t: f64) -> Jet {
        let s = self.profile(x, t);
        let [c, dc, _] = self.chi(s);
        if dc == 0.0 {
            return [c, 0.0, 0.0, 0.0];
        }
        let s5 = s.powi(5);
        let th2 = self.theta * self.theta;
        [c, dc * th2 * x / (3.0 * s5), 0.0, -dc * self.r.powi(4) / s5]
    }

    /// φ₁ = χ(θ|y|).
    pub fn phi1(&self, y: f64) -> Jet {
        let [c, dc, _] = self.chi(self.theta * y.abs());
        [c, 0.0, self.theta * y.signum() * dc, 0.0]
    }

    /// φ = φ₀φ₁.
    pub fn phi(&self, z: KernelPoint) -> Jet {
        let p0 = self.phi0(z.x, z.t);
        let p1 = self.phi1(z.y);
        [p0[0] * p1[0], p0[1] * p1[0], p0[0] * p1[2], p0[3] * p1[0]]
    }

    /// (−y∂x − ∂t)φ₀ at z.
    pub fn transport_of_phi0(&self, z: KernelPoint) -> f64 {
        let p = self.phi0(z.x, z.t);
        -z.y * p[1] - p[3]
    }

    /// Q_θ⁻ = {−r² ≤ t ≤ 0, |y| ≤ r/θ, |x| ≤ r³/θ}.
    pub fn in_q_minus(&self, z: KernelPoint) -> bool {
        let r = self.r;
        (-r * r..=0.0).contains(&z.t) && z.y.abs() <= r / self.theta && z.x.abs() <= r.powi(3) / self.theta
    }
}

/// One sampled property of the cut-off.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffCheck {
    pub name: &'static str,
    pub pass: bool,
    /// The worst sampled value of the quantity the check bounds.
    pub worst: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffCertificate {
    pub checks: Vec<CutoffCheck>,
}

impl CutoffCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// An error naming the first failing item, if any.
    pub fn into_result(self) -> Result<Self> {
        match self.checks.iter().find(|c| !c.pass) {
            Some(c) => Err(Error::Numerical(format!(
                "cut-off property {} fails (worst sample {:e})",
                c.name, c.worst
            ))),
            None => Ok(self),
        }
    }
}

impl fmt::Display for CutoffCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}: {} (worst {:e}, {} samples)", c.name, if c.pass { "pass" } else { "fail" }, c.worst, c.samples)?;
        }
        Ok(())
    }
}

fn lattice(lo: [f64; 3], hi: [f64; 3], n: usize) -> Vec<KernelPoint> {
    let at = |k: usize, d: usize| lo[d] + (hi[d] - lo[d]) * k as f64 / (n - 1) as f64;
    let mut v = Vec::with_capacity(n * n * n);
    for kt in 0..n {
        for ky in 0..n {
            for kx in 0..n {
                v.push(KernelPoint::new(at(kx, 0), at(ky, 1), at(kt, 2)));
            }
        }
    }
    v
}

/// Samples every property of the cut-off on n³ lattices.
pub fn certify(spec: &CutoffSpec, n: usize) -> CutoffCertificate {
    let (r, th) = (spec.r, spec.theta);
    let mut checks = Vec::new();

    // derivative bounds of χ on [0, 1.1 r]
    let m = n * n;
    let bound = spec.slope_bound();
    let mut worst: f64 = 0.0;
    let mut increasing = false;
    for k in 0..m {
        let s = 1.1 * r * k as f64 / (m - 1) as f64;
        let d = spec.chi(s)[1];
        worst = worst.max(d.abs() / bound);
        increasing |= d > 0.0;
    }
    checks.push(CutoffCheck {
        name: "chi_derivative_bound",
        pass: worst <= 1.0 && !increasing,
        worst,
        samples: m,
    });

    // (−y∂x − ∂t)φ₀ ≤ 0 on Q_θ⁻
    let q = lattice([-r.powi(3) / th, -r / th, -r * r], [r.powi(3) / th, r / th, 0.0], n);
    let worst = q.iter().map(|&z| spec.transport_of_phi0(z)).fold(f64::NEG_INFINITY, f64::max);
    checks.push(CutoffCheck {
        name: "transport_sign",
        pass: worst <= 1e-12,
        worst,
        samples: q.len(),
    });

    // φ ≡ 1 on B⁻_{θr}
    let inner = ParabolicBox::past(th * r).lattice(n);
    let worst = inner.iter().map(|&z| (spec.phi(z)[0] - 1.0).abs()).fold(0.0, f64::max);
    checks.push(CutoffCheck {
        name: "unit_on_inner_box",
        pass: worst == 0.0,
        worst,
        samples: inner.len(),
    });

    // supp φ ∩ {t ≤ 0} ⊂ Q_θ⁻, sampled on a box twice as large
    let outer = lattice(
        [-2.0 * r.powi(3) / th, -2.0 * r / th, -2.0 * r * r],
        [2.0 * r.powi(3) / th, 2.0 * r / th, 0.0],
        n,
    );
    let outside = outer
        .iter()
        .filter(|&&z| !spec.in_q_minus(z))
        .map(|&z| spec.phi(z)[0])
        .fold(0.0, f64::max);
    checks.push(CutoffCheck {
        name: "support_in_q_minus",
        pass: outside == 0.0,
        worst: outside,
        samples: outer.len(),
    });

    // the slab {−α₁r² ≤ t ≤ 0} × C_{βr} lies in supp φ
    let br = spec.beta * r;
    let slab = lattice([-br.powi(3), -br, -spec.alpha1 * r * r], [br.powi(3), br, 0.0], n);
    let worst = slab.iter().map(|&z| spec.phi(z)[0]).fold(f64::INFINITY, f64::min);
    checks.push(CutoffCheck {
        name: "slab_in_support",
        pass: worst > 0.0,
        worst,
        samples: slab.len(),
    });

    // 0 < φ₀ < 1 on {−α₁r² ≤ t ≤ −θr²} × C_{βr}
    let band = lattice([-br.powi(3), -br, -spec.alpha1 * r * r], [br.powi(3), br, -th * r * r], n);
    let (lo, hi) = band.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &z| {
        let v = spec.phi0(z.x, z.t)[0];
        (lo.min(v), hi.max(v))
    });
    checks.push(CutoffCheck {
        name: "strict_band",
        pass: spec.alpha1 > th && lo > 0.0 && hi < 1.0,
        worst: if lo <= 0.0 { lo } else { hi },
        samples: band.len(),
    });

    CutoffCertificate { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> CutoffSpec {
        CutoffSpec::new(0.01, 0.005, 0.05, 0.9).unwrap()
    }

    #[test]
    fn default_alpha1_is_the_midpoint() {
        assert!((spec().alpha1 - 0.03).abs() < 1e-15);
        assert!(CutoffSpec::new(0.02, 0.5, 0.05, 0.9).is_err());
        assert!(CutoffSpec::new(0.01, 0.5, 0.005, 0.9).is_err());
    }

    #[test]
    fn chi_shape() {
        let s = spec();
        assert_eq!(s.chi(0.0)[0], 1.0);
        assert_eq!(s.chi(s.inner())[0], 1.0);
        assert_eq!(s.chi(s.r)[0], 0.0);
        let mid = 0.5 * (s.inner() + s.r);
        assert!((s.chi(mid)[0] - 0.5).abs() < 1e-12);
        // derivative by differences
        let h = 1e-9;
        let fd = (s.chi(mid + h)[0] - s.chi(mid - h)[0]) / (2.0 * h);
        assert!((fd - s.chi(mid)[1]).abs() < 1e-3 * fd.abs());
    }

    #[test]
    fn phi_examples() {
        let s = spec();
        assert_eq!(s.phi(KernelPoint::new(0.0, 0.0, -0.5 * (s.theta * s.r).powi(2)))[0], 1.0);
        assert_eq!(s.phi(KernelPoint::new(0.0, s.r / s.theta, -1e-12))[0], 0.0);
        assert_eq!(s.phi(KernelPoint::new(0.0, 2.0 * s.r / s.theta, -1e-12))[0], 0.0);
    }

    #[test]
    fn phi_derivatives_match_differences() {
        let s = CutoffSpec::new(0.01, 0.5, 0.05, 0.9).unwrap();
        let z = KernelPoint::new(0.3 * s.r.powi(3), 0.4 * s.r / s.theta, -0.05 * s.r * s.r);
        let j = s.phi(z);
        let (hx, hy, ht) = (1e-7 * s.r.powi(3), 1e-6, 1e-8);
        let f = |dx: f64, dy: f64, dt: f64| s.phi(KernelPoint::new(z.x + dx, z.y + dy, z.t + dt))[0];
        assert!(j[0] > 0.0 && j[0] < 1.0);
        assert!((j[1] - (f(hx, 0.0, 0.0) - f(-hx, 0.0, 0.0)) / (2.0 * hx)).abs() < 1e-5 * j[1].abs().max(1.0));
        assert!((j[2] - (f(0.0, hy, 0.0) - f(0.0, -hy, 0.0)) / (2.0 * hy)).abs() < 1e-5);
        assert!((j[3] - (f(0.0, 0.0, ht) - f(0.0, 0.0, -ht)) / (2.0 * ht)).abs() < 1e-4 * j[3].abs().max(1.0));
    }

    #[test]
    fn default_spec_is_certified() {
        let c = certify(&spec(), 33);
        assert!(c.passed(), "{c}");
        assert!(c.into_result().is_ok());
    }

    #[test]
    fn failing_item_is_named() {
        // α₁ ≤ θ breaks the strict band
        let mut s = spec();
        s.alpha1 = 0.005;
        let err = certify(&s, 9).into_result().unwrap_err();
        assert!(err.to_string().contains("strict_band"), "{err}");
    }
}
