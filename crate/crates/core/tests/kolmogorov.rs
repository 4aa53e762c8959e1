use std::f64::consts::PI;

use crocco_prandtl::kolmogorov::{certify, gamma0, normalization, CutoffSpec, KernelPoint};

#[test]
fn kernel_value_on_the_axis() {
    let v = gamma0(KernelPoint::new(0.0, 0.0, 1.0), KernelPoint::ORIGIN);
    assert!((v - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
}

/// Mass by a plain midpoint rule in the sheared coordinate x − s y / 2,
/// independent of the library's Gauss–Legendre rule.
#[test]
fn kernel_mass_by_midpoint_rule() {
    let z = KernelPoint::new(0.1, 0.2, 1.0);
    for tau in [0.9, 0.0] {
        let s = z.t - tau;
        let (wy, wx) = (12.0 * s.sqrt(), 12.0 * (s * s * s / 3.0).sqrt());
        let n = 1500;
        let (hy, hx) = (2.0 * wy / n as f64, 2.0 * wx / n as f64);
        let mut total = 0.0;
        for a in 0..n {
            let eta = z.y - wy + (a as f64 + 0.5) * hy;
            let centre = z.x - 0.5 * s * (z.y + eta);
            for b in 0..n {
                let xi = centre - wx + (b as f64 + 0.5) * hx;
                total += gamma0(z, KernelPoint::new(xi, eta, tau));
            }
        }
        let mass = total * hx * hy;
        assert!((mass - 1.0).abs() < 1e-9, "s = {s}: {mass}");
        assert!((normalization(z, s) - mass).abs() < 1e-9);
    }
}

/// (∂t − ∂²y + y∂x)Γ₀ with fourth-order centred differences.
#[test]
fn kernel_solves_the_operator() {
    let zeta = KernelPoint::new(0.05, -0.1, 0.0);
    let h = 1e-3;
    for (x, y, t) in [(0.1, 0.2, 1.0), (-0.2, 0.4, 0.5), (0.3, -0.3, 0.8)] {
        let g = |dx: f64, dy: f64, dt: f64| gamma0(KernelPoint::new(x + dx, y + dy, t + dt), zeta);
        let d1 = |f: &dyn Fn(f64) -> f64| (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
        let gt = d1(&|e| g(0.0, 0.0, e));
        let gx = d1(&|e| g(e, 0.0, 0.0));
        let f = |e: f64| g(0.0, e, 0.0);
        let gyy = (-f(-2.0 * h) + 16.0 * f(-h) - 30.0 * f(0.0) + 16.0 * f(h) - f(2.0 * h)) / (12.0 * h * h);
        let res = gt - gyy + y * gx;
        let scale = gt.abs() + gyy.abs() + (y * gx).abs();
        assert!(res.abs() < 1e-6 * scale, "({x}, {y}, {t}): {res} vs {scale}");
    }
}

#[test]
fn default_cutoff_certifies() {
    let theta = 0.01;
    let spec = CutoffSpec::new(theta, theta / 2.0, 2.0, 0.9).unwrap();
    let cert = certify(&spec, 33);
    assert!(cert.passed(), "{cert}");
    assert_eq!(cert.checks.len(), 6);
}
