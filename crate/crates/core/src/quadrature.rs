//! Gauss rules used by the kernel integrals.

use std::f64::consts::PI;

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to `f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule on [a, b] with `panels` equal panels of
/// `points` nodes each.
pub fn composite(a: f64, b: f64, panels: usize, points: usize) -> Rule {
    let base = gauss_legendre(points);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * points);
    let mut weights = Vec::with_capacity(panels * points);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(mid + 0.5 * h * x);
            weights.push(0.5 * h * w);
        }
    }
    Rule { nodes, weights }
}

/// n-point Gauss–Hermite rule for the weight exp(−x²) on the real line.
pub fn gauss_hermite(n: usize) -> Rule {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let mut x = 0.0;
    for k in 0..n.div_ceil(2) {
        // initial guesses from Numerical Recipes' gauher
        x = match k {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => x - 1.14 * nf.powf(0.426) / x,
            2 => 1.86 * x - 0.86 * nodes[n - 1],
            3 => 1.91 * x - 0.91 * nodes[n - 2],
            _ => 2.0 * x - nodes[n + 1 - k],
        };
        for _ in 0..200 {
            let (p, d) = hermite_normalized(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 * x.abs().max(1.0) {
                break;
            }
        }
        let d = hermite_normalized(n, x).1;
        let w = 2.0 / (d * d);
        nodes[n - 1 - k] = x;
        nodes[k] = -x;
        weights[n - 1 - k] = w;
        weights[k] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

// Orthonormal Hermite recurrence (stable for large n); returns the value
// and derivative of the n-th function.
fn hermite_normalized(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 0.0;
    let mut p1 = PI.powf(-0.25);
    for k in 1..=n {
        let kf = k as f64;
        let p2 = x * (2.0 / kf).sqrt() * p1 - ((kf - 1.0) / kf).sqrt() * p0;
        p0 = p1;
        p1 = p2;
    }
    (p1, (2.0 * n as f64).sqrt() * p0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in 1..=20 {
            let r = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
                let got = r.integrate(|x| x.powi(deg as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg} got={got}");
            }
        }
    }

    #[test]
    fn composite_rule_on_interval() {
        let r = composite(0.0, PI, 8, 6);
        assert!((r.integrate(f64::sin) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hermite_moments() {
        let sqrt_pi = PI.sqrt();
        for n in [1usize, 2, 5, 10, 16, 24, 40] {
            let r = gauss_hermite(n);
            assert!((r.weights.iter().sum::<f64>() - sqrt_pi).abs() < 1e-13, "n={n}");
            // E[x^2k] for weight e^{-x²}: Γ(k+½)
            let mut moment = sqrt_pi;
            for k in 0..n.min(8) {
                let got = r.integrate(|x| x.powi(2 * k as i32));
                assert!((got - moment).abs() < 1e-11 * moment.max(1.0), "n={n} k={k}");
                moment *= k as f64 + 0.5;
            }
            for w in r.nodes.windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }
}
