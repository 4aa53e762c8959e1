use super::flow::ExternalFlow;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::solver::FieldHistory;
use crate::table::derivative_1d;

/// A Crocco profile w(η) on a uniform η grid covering [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct CroccoProfile {
    pub eta: Vec<f64>,
    pub w: Vec<f64>,
}

/// A physical profile u(y) at the mapped heights y(η).
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalProfile {
    pub y: Vec<f64>,
    pub u: Vec<f64>,
}

/// Converts a sampled monotone velocity profile `u(y)` to Crocco form
/// `w(η) = ∂y u / U` at `η = u / U`, resampled on `n_eta` uniform cells.
///
/// Heights above the last sample are closed off linearly towards w(1) = 0.
pub fn to_crocco(y: &[f64], u: &[f64], u_ext: f64, n_eta: usize) -> Result<CroccoProfile> {
    if y.len() != u.len() || y.len() < 3 {
        return Err(Error::Transform("profile needs at least three (y, u) samples".into()));
    }
    if !(u_ext > 0.0) {
        return Err(Error::Transform(format!("outer velocity U = {u_ext} must be positive")));
    }
    if u[0].abs() > 1e-12 * u_ext {
        return Err(Error::Transform(format!("profile must vanish at the wall, u(0) = {}", u[0])));
    }
    for k in 0..y.len() - 1 {
        if !(y[k + 1] > y[k]) {
            return Err(Error::Transform(format!("heights not increasing at sample {k}")));
        }
        if !(u[k + 1] > u[k]) {
            return Err(Error::Transform(format!(
                "profile is not strictly increasing on [{}, {}]",
                y[k],
                y[k + 1]
            )));
        }
    }
    let n = y.len();
    let mut eta_s: Vec<f64> = u.iter().map(|v| v / u_ext).collect();
    let mut w_s: Vec<f64> = (0..n).map(|k| derivative_1d(y, n, k, |m| u[m]) / u_ext).collect();
    if *eta_s.last().unwrap() >= 1.0 {
        return Err(Error::Transform("profile reaches or exceeds U at a finite height".into()));
    }
    eta_s.push(1.0);
    w_s.push(0.0);

    let eta: Vec<f64> = (0..=n_eta).map(|j| j as f64 / n_eta as f64).collect();
    let mut w = Vec::with_capacity(eta.len());
    let mut k = 0;
    for &e in &eta {
        while k + 2 < eta_s.len() && eta_s[k + 1] < e {
            k += 1;
        }
        let s = ((e - eta_s[k]) / (eta_s[k + 1] - eta_s[k])).clamp(0.0, 1.0);
        w.push((1.0 - s) * w_s[k] + s * w_s[k + 1]);
    }
    Ok(CroccoProfile { eta, w })
}

/// Inverts the Crocco map for one profile: y(η) = ∫₀^η dη'/w by the
/// composite trapezoid rule and u = η U. The point η = 1, where w = 0,
/// maps to y = +∞ when w vanishes there.
pub fn from_crocco_profile(eta: &[f64], w: &[f64], u_ext: f64) -> Result<PhysicalProfile> {
    let n = eta.len();
    let mut y = Vec::with_capacity(n);
    let mut acc = 0.0;
    for k in 0..n {
        let last_top = k == n - 1 && eta[k] >= 1.0 && w[k] <= 0.0;
        if !last_top && !(w[k] > 0.0) {
            return Err(Error::Transform(format!(
                "w = {} at eta = {} is not positive; the profile cannot be inverted",
                w[k], eta[k]
            )));
        }
        if k > 0 {
            if last_top {
                acc = f64::INFINITY;
            } else {
                acc += 0.5 * (eta[k] - eta[k - 1]) * (1.0 / w[k - 1] + 1.0 / w[k]);
            }
        }
        y.push(acc);
    }
    let u = eta.iter().map(|e| e * u_ext).collect();
    Ok(PhysicalProfile { y, u })
}

/// Physical heights and velocities for every (t_n, x_i, η_j) node of a
/// Crocco history; layout `[(n * (nx+1) + i) * (ny+1) + j]`.
#[derive(Debug, Clone)]
pub struct PhysicalField {
    pub grid: GridSpec,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
}

/// Maps a whole solution history back to physical variables.
pub fn from_crocco(history: &FieldHistory, flow: &ExternalFlow) -> Result<PhysicalField> {
    let g = history.grid;
    let eta: Vec<f64> = (0..=g.ny).map(|j| g.y(j)).collect();
    let mut y = Vec::with_capacity((g.nt + 1) * g.nodes_per_snapshot());
    let mut u = Vec::with_capacity(y.capacity());
    for (n, snap) in history.snapshots.iter().enumerate() {
        for i in 0..=g.nx {
            let col = snap.column(i);
            let ue = flow.eval(g.x(i), g.t(n)).u;
            let p = from_crocco_profile(&eta, col, ue).map_err(|e| {
                Error::Transform(format!("at (x, t) = ({}, {}): {e}", g.x(i), g.t(n)))
            })?;
            y.extend(p.y);
            u.extend(p.u);
        }
    }
    Ok(PhysicalField { grid: g, y, u })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_profile_maps_to_linear_w() {
        let dy = 1e-3;
        let y: Vec<f64> = (0..=20_000).map(|k| k as f64 * dy).collect();
        let u: Vec<f64> = y.iter().map(|y| 1.0 - (-y).exp()).collect();
        let c = to_crocco(&y, &u, 1.0, 64).unwrap();
        for (e, w) in c.eta.iter().zip(&c.w) {
            assert!((w - (1.0 - e)).abs() < 1e-6, "eta={e} w={w}");
        }
    }

    #[test]
    fn linear_profile_maps_to_unit_w() {
        let y: Vec<f64> = (0..=50).map(|k| k as f64 / 50.0 * 0.999).collect();
        let u = y.clone();
        let c = to_crocco(&y, &u, 1.0, 10).unwrap();
        for (e, w) in c.eta.iter().zip(&c.w) {
            if *e <= 0.999 {
                assert!((w - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_monotone_profile_is_rejected() {
        let y = [0.0, 0.1, 0.2, 0.3];
        let u = [0.0, 0.2, 0.15, 0.3];
        let e = to_crocco(&y, &u, 1.0, 8).unwrap_err();
        assert!(e.to_string().contains("[0.1, 0.2]"), "{e}");
    }

    #[test]
    fn inversion_examples() {
        let eta: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
        let ones = vec![1.0; eta.len()];
        let p = from_crocco_profile(&eta, &ones, 1.0).unwrap();
        for (y, e) in p.y.iter().zip(&eta) {
            assert!((y - e).abs() < 1e-14);
        }
        let twos = vec![2.0; eta.len()];
        let p = from_crocco_profile(&eta, &twos, 1.0).unwrap();
        for k in 0..eta.len() {
            assert!((p.y[k] - eta[k] / 2.0).abs() < 1e-14);
            assert!((p.u[k] - 2.0 * p.y[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn inversion_of_linear_w_is_logarithmic_at_second_order() {
        let err = |n: usize| {
            let eta: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
            let w: Vec<f64> = eta.iter().map(|e| 1.0 - e).collect();
            let p = from_crocco_profile(&eta, &w, 1.0).unwrap();
            assert!(p.y[n].is_infinite());
            // compare on the fixed height eta = 1/2
            (p.y[n / 2] - 2f64.ln()).abs()
        };
        let (e1, e2) = (err(64), err(128));
        assert!(e1 < 1e-4);
        assert!((e1 / e2).log2() > 1.9);
    }

    #[test]
    fn non_positive_w_is_rejected() {
        let eta = [0.0, 0.5, 1.0];
        assert!(from_crocco_profile(&eta, &[1.0, 0.0, 0.0], 1.0).is_err());
    }
}
