use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::composite;

/// A point z = (x, y, t) (or ζ = (ξ, η, τ)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl KernelPoint {
    pub const ORIGIN: KernelPoint = KernelPoint { x: 0.0, y: 0.0, t: 0.0 };

    pub fn new(x: f64, y: f64, t: f64) -> Self {
        KernelPoint { x, y, t }
    }

    /// δ_μ z = (μ³x, μy, μ²t).
    pub fn dilated(self, mu: f64) -> Self {
        KernelPoint::new(mu.powi(3) * self.x, mu * self.y, mu * mu * self.t)
    }
}

/// Exponent of the kernel with the y-diffusion denominator `k·s`.
#[inline]
fn exponent(z: KernelPoint, zeta: KernelPoint, k: f64) -> f64 {
    let s = z.t - zeta.t;
    let dy = z.y - zeta.y;
    let shear = z.x - zeta.x - 0.5 * s * (z.y + zeta.y);
    -dy * dy / (k * s) - 3.0 / (s * s * s) * shear * shear
}

/// Fundamental solution of ∂t − ∂²y + y∂x:
///
/// Γ₀(z, ζ) = √3/(2π s²) exp{−(y−η)²/(4s) − 3/s³ (x − ξ − s(y+η)/2)²}, s = t − τ > 0,
///
/// and 0 for t ≤ τ.
pub fn gamma0(z: KernelPoint, zeta: KernelPoint) -> f64 {
    let s = z.t - zeta.t;
    if s <= 0.0 {
        return 0.0;
    }
    3f64.sqrt() / (2.0 * PI * s * s) * exponent(z, zeta, 4.0).exp()
}

/// The same closed form with 3s in place of 4s in the y-diffusion
/// exponent. It carries mass √3/2 instead of 1 and is not annihilated
/// by the operator; kept so the discrepancy can be reported.
pub fn gamma0_as_printed(z: KernelPoint, zeta: KernelPoint) -> f64 {
    let s = z.t - zeta.t;
    if s <= 0.0 {
        return 0.0;
    }
    3f64.sqrt() / (2.0 * PI * s * s) * exponent(z, zeta, 3.0).exp()
}

/// ∂_η log Γ₀(z, ζ) for t > τ.
pub fn d_eta_log_gamma0(z: KernelPoint, zeta: KernelPoint) -> f64 {
    let s = z.t - zeta.t;
    let shear = z.x - zeta.x - 0.5 * s * (z.y + zeta.y);
    (z.y - zeta.y) / (2.0 * s) + 3.0 * shear / (s * s)
}

/// Centered-difference value of (∂t − ∂²y + y∂x)Γ₀(·, ζ) at z with step h.
/// Zero when the whole stencil lies in t ≤ τ; a parameter error when the
/// stencil comes within 10h of the singular time.
pub fn l0_residual(z: KernelPoint, zeta: KernelPoint, h: f64) -> Result<f64> {
    residual_of(gamma0, z, zeta, h)
}

pub(crate) fn residual_of(
    kernel: fn(KernelPoint, KernelPoint) -> f64,
    z: KernelPoint,
    zeta: KernelPoint,
    h: f64,
) -> Result<f64> {
    let s = z.t - zeta.t;
    if s + h <= 0.0 {
        return Ok(0.0);
    }
    if s < 10.0 * h {
        return Err(Error::Parameter(format!(
            "t - tau = {s} is within 10h = {} of the kernel singularity",
            10.0 * h
        )));
    }
    let g = |dx: f64, dy: f64, dt: f64| kernel(KernelPoint::new(z.x + dx, z.y + dy, z.t + dt), zeta);
    let gt = (g(0.0, 0.0, h) - g(0.0, 0.0, -h)) / (2.0 * h);
    let gyy = (g(0.0, h, 0.0) - 2.0 * g(0.0, 0.0, 0.0) + g(0.0, -h, 0.0)) / (h * h);
    let gx = (g(h, 0.0, 0.0) - g(-h, 0.0, 0.0)) / (2.0 * h);
    Ok(gt - gyy + z.y * gx)
}

/// |Γ₀(δ_μ z, 0) − μ⁻⁴ Γ₀(z, 0)|.
pub fn dilation_defect(z: KernelPoint, mu: f64) -> f64 {
    (gamma0(z.dilated(mu), KernelPoint::ORIGIN) - mu.powi(-4) * gamma0(z, KernelPoint::ORIGIN)).abs()
}

/// ∫∫ K(z, ζ) dξ dη for s = t − τ > 0, by nested composite Gauss–Legendre
/// over a sheared window where the exponent stays above −40: η within
/// y ± √(160 s), ξ within √(40 s³/3) of x − s(y+η)/2.
pub fn normalization_of(kernel: fn(KernelPoint, KernelPoint) -> f64, z: KernelPoint, s: f64) -> f64 {
    let half_eta = (160.0 * s).sqrt();
    let half_xi = (40.0 * s * s * s / 3.0).sqrt();
    let tau = z.t - s;
    let eta_rule = composite(z.y - half_eta, z.y + half_eta, 16, 16);
    eta_rule.integrate(|eta| {
        let center = z.x - 0.5 * s * (z.y + eta);
        let xi_rule = composite(center - half_xi, center + half_xi, 16, 16);
        xi_rule.integrate(|xi| kernel(z, KernelPoint::new(xi, eta, tau)))
    })
}

/// ∫∫ Γ₀(z, ζ) dξ dη at time separation s.
pub fn normalization(z: KernelPoint, s: f64) -> f64 {
    normalization_of(gamma0, z, s)
}

/// Least-squares order of |l0_residual| over the stencil widths `hs`.
pub fn residual_order(z: KernelPoint, zeta: KernelPoint, hs: &[f64]) -> Result<f64> {
    let r = hs
        .iter()
        .map(|&h| l0_residual(z, zeta, h).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::mms::fitted_order(hs, &r))
}

/// `count` seeded pairs (z, μ) with x, y ∈ [−1, 1], t ∈ [0.1, 1] and
/// μ ∈ [1/2, 2].
pub fn dilation_pairs(seed: u64, count: usize) -> Vec<(KernelPoint, f64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let z = KernelPoint::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(0.1..=1.0));
            (z, rng.gen_range(0.5..=2.0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_branch() {
        let z = KernelPoint::new(0.3, 0.1, 0.5);
        assert_eq!(gamma0(z, KernelPoint::new(0.0, 0.0, 0.5)), 0.0);
        assert_eq!(gamma0(z, KernelPoint::new(0.0, 0.0, 0.9)), 0.0);
    }

    #[test]
    fn value_on_the_axis() {
        let v = gamma0(KernelPoint::new(0.0, 0.0, 1.0), KernelPoint::ORIGIN);
        assert!((v - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
        assert!((v - 0.275664).abs() < 1e-6);
    }

    #[test]
    fn unit_mass() {
        let z = KernelPoint::new(0.2, -0.4, 0.0);
        for s in [0.1, 1.0, 3.0] {
            assert!((normalization(z, s) - 1.0).abs() < 1e-8, "s={s}");
        }
        let printed = normalization_of(gamma0_as_printed, z, 1.0);
        assert!((printed - 3f64.sqrt() / 2.0).abs() < 1e-8);
    }

    #[test]
    fn residual_is_second_order() {
        let z = KernelPoint::new(0.1, 0.2, 1.0);
        let r1 = l0_residual(z, KernelPoint::ORIGIN, 1e-3).unwrap();
        let r2 = l0_residual(z, KernelPoint::ORIGIN, 5e-4).unwrap();
        assert!(r1.abs() <= 1e-4);
        assert!((r1 / r2).log2() > 1.9, "{r1} {r2}");
        let printed = residual_of(gamma0_as_printed, z, KernelPoint::ORIGIN, 1e-3).unwrap();
        assert!(printed.abs() > 1e-2);
    }

    #[test]
    fn residual_guards() {
        let zeta = KernelPoint::new(0.0, 0.0, 1.0);
        assert_eq!(l0_residual(KernelPoint::new(0.1, 0.2, 0.5), zeta, 1e-3).unwrap(), 0.0);
        assert!(l0_residual(KernelPoint::new(0.1, 0.2, 1.005), zeta, 1e-3).is_err());
    }

    #[test]
    fn dilation_examples() {
        let z = KernelPoint::new(0.1, 0.3, 0.5);
        assert_eq!(dilation_defect(z, 1.0), 0.0);
        assert!(dilation_defect(z, 2.0) <= 1e-12);
        assert!(dilation_defect(KernelPoint::new(-0.2, 0.7, 0.8), 0.5) <= 1e-12);
        let pairs = dilation_pairs(7, 100);
        assert_eq!(pairs, dilation_pairs(7, 100));
        assert!(pairs.iter().all(|&(z, mu)| dilation_defect(z, mu) <= 1e-12));
    }

    #[test]
    fn fitted_residual_order() {
        let z = KernelPoint::new(0.1, 0.2, 1.0);
        let p = residual_order(z, KernelPoint::ORIGIN, &[4e-3, 2e-3, 1e-3]).unwrap();
        assert!(p > 1.9, "{p}");
    }

    #[test]
    fn log_derivative_matches_differences() {
        let z = KernelPoint::new(0.05, 0.1, 0.4);
        let zeta = KernelPoint::new(-0.02, 0.3, 0.1);
        let h = 1e-6;
        let up = gamma0(z, KernelPoint::new(zeta.x, zeta.y + h, zeta.t)).ln();
        let dn = gamma0(z, KernelPoint::new(zeta.x, zeta.y - h, zeta.t)).ln();
        assert!(((up - dn) / (2.0 * h) - d_eta_log_gamma0(z, zeta)).abs() < 1e-6);
    }
}
