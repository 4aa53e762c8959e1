//! Discrete versions of the functionals bounded by the existence,
//! uniqueness and stability theory, evaluated on solver histories.
//!
//! Space-time integrals use the midpoint rule on grid cells. A cell value
//! is the mean of its eight corner values; first derivatives at a cell
//! center average the four parallel edge differences.

mod norms;
mod report;
mod stability;
mod trace;
mod weak;

pub use norms::{
    bv_seminorm, comparison_constant, weighted_dyy_measure, weighted_grad_norms, ComparisonBound, Domain,
};
pub use report::{EntryValue, EstimateReport, ReportEntry};
pub use stability::{l1_stability, physical_stability, PhysicalStability, StabilityConstant, StabilityReport};
pub use trace::{trace_residual, LineResidual, TraceReport};
pub use weak::{weak_residual, weak_residual_signed, TestFunction, TestFunctionFamily, WeakResidual};

use crate::solver::FieldHistory;

/// Cell-center value of cell (i, j, n): mean of the eight corners.
#[inline]
pub(crate) fn cell_mean(h: &FieldHistory, i: usize, j: usize, n: usize) -> f64 {
    let (s0, s1) = (&h.snapshots[n], &h.snapshots[n + 1]);
    (s0.at(i, j)
        + s0.at(i + 1, j)
        + s0.at(i, j + 1)
        + s0.at(i + 1, j + 1)
        + s1.at(i, j)
        + s1.at(i + 1, j)
        + s1.at(i, j + 1)
        + s1.at(i + 1, j + 1))
        / 8.0
}

/// (u_x, u_y, u_t) at the center of cell (i, j, n).
#[inline]
pub(crate) fn cell_gradient(h: &FieldHistory, i: usize, j: usize, n: usize) -> [f64; 3] {
    let g = &h.grid;
    let (s0, s1) = (&h.snapshots[n], &h.snapshots[n + 1]);
    let mut d = [0.0; 3];
    for s in [s0, s1] {
        d[0] += s.at(i + 1, j) - s.at(i, j) + s.at(i + 1, j + 1) - s.at(i, j + 1);
        d[1] += s.at(i, j + 1) - s.at(i, j) + s.at(i + 1, j + 1) - s.at(i + 1, j);
    }
    for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        d[2] += s1.at(i + di, j + dj) - s0.at(i + di, j + dj);
    }
    [d[0] / (4.0 * g.dx()), d[1] / (4.0 * g.dy()), d[2] / (4.0 * g.dt())]
}

#[cfg(test)]
pub(crate) mod tests {
    use crate::crocco::{CroccoProblem, ExternalFlow, ProblemData};
    use crate::grid::GridSpec;
    use crate::solver::{FieldHistory, FieldSnapshot};

    /// A history holding the samples of `f` (no solve involved).
    pub(crate) fn history_from(g: &GridSpec, f: impl Fn(f64, f64, f64) -> f64) -> FieldHistory {
        let snapshots = (0..=g.nt)
            .map(|n| FieldSnapshot {
                time: g.t(n),
                eps: 0.0,
                ny: g.ny,
                values: (0..=g.nx)
                    .flat_map(|i| (0..=g.ny).map(move |j| (i, j)))
                    .map(|(i, j)| f(g.x(i), g.y(j), g.t(n)))
                    .collect(),
            })
            .collect();
        FieldHistory {
            grid: *g,
            eps: 0.0,
            problem: CroccoProblem::new(ExternalFlow::uniform(g.length, g.horizon), ProblemData::linear_profile(-1.0)),
            snapshots,
            diagnostics: Vec::new(),
        }
    }
}
