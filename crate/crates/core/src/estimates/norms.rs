use std::fmt;

use super::cell_gradient;
use crate::error::{Error, Result};
use crate::solver::FieldHistory;

/// Integration domain of a norm: all of Q_T, or Q_T with a two-cell margin
/// removed on each side in x and y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Domain {
    #[default]
    Full,
    Interior,
}

impl Domain {
    pub const MARGIN: usize = 2;

    /// Cell index ranges (x, y) for a grid with `nx` by `ny` cells.
    pub(crate) fn cells(self, nx: usize, ny: usize) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        match self {
            Domain::Full => (0..nx, 0..ny),
            Domain::Interior => {
                let m = Self::MARGIN;
                (m.min(nx)..nx.saturating_sub(m), m.min(ny)..ny.saturating_sub(m))
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Full => "full",
            Domain::Interior => "interior",
        })
    }
}

/// Result of [`comparison_constant`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonBound {
    /// max of u/(1−y) and (1−y)/u over nodes with y < 1; infinite if some
    /// such node has u ≤ 0.
    pub value: f64,
    /// First (i, j, n) with u ≤ 0 below y = 1.
    pub nonpositive: Option<[usize; 3]>,
}

impl ComparisonBound {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// Smallest C with C⁻¹(1−y) ≤ u ≤ C(1−y) at every node below y = 1.
pub fn comparison_constant(h: &FieldHistory, domain: Domain) -> ComparisonBound {
    let g = &h.grid;
    let (xs, ys) = match domain {
        Domain::Full => (0..g.nx + 1, 0..g.ny),
        Domain::Interior => {
            let (a, b) = domain.cells(g.nx, g.ny);
            (a.start..a.end + 1, b.start..b.end + 1)
        }
    };
    let mut c: f64 = 1.0;
    for (n, s) in h.snapshots.iter().enumerate() {
        for i in xs.clone() {
            for j in ys.clone() {
                let u = s.at(i, j);
                let w = 1.0 - g.y(j);
                if !(u > 0.0) {
                    return ComparisonBound {
                        value: f64::INFINITY,
                        nonpositive: Some([i, j, n]),
                    };
                }
                c = c.max(u / w).max(w / u);
            }
        }
    }
    ComparisonBound {
        value: c,
        nonpositive: None,
    }
}

/// ∫_{Q_T} |u_x| + |u_y| + |u_t|.
pub fn bv_seminorm(h: &FieldHistory, domain: Domain) -> f64 {
    let g = &h.grid;
    let (xs, ys) = domain.cells(g.nx, g.ny);
    let mut total = 0.0;
    for n in 0..g.nt {
        for i in xs.clone() {
            for j in ys.clone() {
                let [ux, uy, ut] = cell_gradient(h, i, j, n);
                total += ux.abs() + uy.abs() + ut.abs();
            }
        }
    }
    total * g.dx() * g.dy() * g.dt()
}

/// (N1, N2) = (∫(1−y)^α |u_y|, ∫(1−y)^α |u_y|²) over Q_T, for α > −1.
pub fn weighted_grad_norms(h: &FieldHistory, alpha: f64, domain: Domain) -> Result<(f64, f64)> {
    if !(alpha > -1.0) {
        return Err(Error::Parameter(format!("weight exponent {alpha} must exceed -1")));
    }
    let g = &h.grid;
    let (xs, ys) = domain.cells(g.nx, g.ny);
    let weights: Vec<f64> = (0..g.ny).map(|j| (1.0 - g.y(j) - 0.5 * g.dy()).powf(alpha)).collect();
    let (mut n1, mut n2) = (0.0, 0.0);
    for n in 0..g.nt {
        for i in xs.clone() {
            for j in ys.clone() {
                let uy = cell_gradient(h, i, j, n)[1].abs();
                n1 += weights[j] * uy;
                n2 += weights[j] * uy * uy;
            }
        }
    }
    let vol = g.dx() * g.dy() * g.dt();
    Ok((n1 * vol, n2 * vol))
}

/// ∫(1−y)^α |u_yy| for α > 0, with |u_yy| approximated by absolute second
/// differences at nodes and the trapezoid rule in every direction. Rows
/// y = 0 and y = 1 reuse the second difference of their neighbor.
pub fn weighted_dyy_measure(h: &FieldHistory, alpha: f64, domain: Domain) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Parameter(format!("weight exponent {alpha} must be positive")));
    }
    let g = &h.grid;
    let (xs, ys) = domain.cells(g.nx, g.ny);
    let trap = |k: usize, lo: usize, hi: usize| if k == lo || k == hi { 0.5 } else { 1.0 };
    let dy2 = g.dy() * g.dy();
    let mut total = 0.0;
    for (n, s) in h.snapshots.iter().enumerate() {
        let wt = trap(n, 0, g.nt);
        for i in xs.start..=xs.end {
            let wx = trap(i, xs.start, xs.end);
            for j in ys.start..=ys.end {
                let jc = j.clamp(1, g.ny - 1);
                let d2 = (s.at(i, jc + 1) - 2.0 * s.at(i, jc) + s.at(i, jc - 1)).abs() / dy2;
                let wy = trap(j, ys.start, ys.end);
                total += wt * wx * wy * (1.0 - g.y(j)).powf(alpha) * d2;
            }
        }
    }
    Ok(total * g.dx() * g.dy() * g.dt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::tests::history_from;
    use crate::grid::GridSpec;

    fn grid(l: f64) -> GridSpec {
        GridSpec::new(8, 16, 8, l, 1.0).unwrap()
    }

    #[test]
    fn comparison_examples() {
        let h = history_from(&grid(1.0), |_, y, _| 1.0 - y);
        assert_eq!(comparison_constant(&h, Domain::Full).value, 1.0);
        let h = history_from(&grid(1.0), |_, y, _| 2.0 * (1.0 - y));
        assert_eq!(comparison_constant(&h, Domain::Full).value, 2.0);
        let h = history_from(&grid(1.0), |x, y, _| if x > 0.5 && y < 0.5 { 0.0 } else { 1.0 - y });
        let c = comparison_constant(&h, Domain::Full);
        assert!(!c.is_finite());
        assert!(c.nonpositive.is_some());
    }

    #[test]
    fn bv_examples() {
        let h = history_from(&grid(1.0), |_, y, _| 1.0 - y);
        assert!((bv_seminorm(&h, Domain::Full) - 1.0).abs() < 1e-13);
        let h = history_from(&grid(2.0), |_, y, _| 1.0 - y);
        assert!((bv_seminorm(&h, Domain::Full) - 2.0).abs() < 1e-13);
        let h = history_from(&grid(1.0), |_, _, _| 0.7);
        assert_eq!(bv_seminorm(&h, Domain::Full), 0.0);
    }

    #[test]
    fn weighted_gradient_examples() {
        let h = history_from(&grid(1.0), |_, y, _| 1.0 - y);
        let (n1, n2) = weighted_grad_norms(&h, 1.0, Domain::Full).unwrap();
        assert!((n1 - 0.5).abs() < 1e-13 && (n2 - 0.5).abs() < 1e-13);
        let (n1, n2) = weighted_grad_norms(&h, 0.0, Domain::Full).unwrap();
        assert!((n1 - 1.0).abs() < 1e-13 && (n2 - 1.0).abs() < 1e-13);
        let h = history_from(&grid(1.0), |_, _, _| 3.0);
        assert_eq!(weighted_grad_norms(&h, 2.0, Domain::Full).unwrap(), (0.0, 0.0));
        assert!(weighted_grad_norms(&h, -1.0, Domain::Full).is_err());
    }

    #[test]
    fn dyy_examples() {
        let h = history_from(&grid(1.0), |_, y, _| 1.0 - y);
        assert!(weighted_dyy_measure(&h, 1.0, Domain::Full).unwrap() < 1e-10);
        let h = history_from(&grid(1.0), |_, y, _| (1.0 - y).powi(2));
        assert!((weighted_dyy_measure(&h, 1.0, Domain::Full).unwrap() - 1.0).abs() < 1e-10);
        assert!(weighted_dyy_measure(&h, 0.0, Domain::Full).is_err());
    }

    #[test]
    fn interior_is_smaller_for_positive_integrands() {
        let h = history_from(&grid(1.0), |x, y, t| (1.0 - y) * (1.0 + x * t));
        assert!(bv_seminorm(&h, Domain::Interior) < bv_seminorm(&h, Domain::Full));
    }
}
