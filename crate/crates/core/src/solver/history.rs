use crate::crocco::CroccoProblem;
use crate::grid::GridSpec;

/// The solution at one time level; `values[i * (ny+1) + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub time: f64,
    pub eps: f64,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl FieldSnapshot {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.ny + 1) + j]
    }

    /// The y-column at x-node `i`.
    pub fn column(&self, i: usize) -> &[f64] {
        let m = self.ny + 1;
        &self.values[i * m..(i + 1) * m]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepDiagnostics {
    /// Sum of wall Newton iterations over all columns.
    pub newton_iterations: usize,
    /// Largest iteration count of any single column.
    pub max_newton_iterations: usize,
    /// Stability-bound margin at the start of the step (≥ 1).
    pub cfl_margin: f64,
}

/// Full space-time solution: `nt + 1` snapshots plus per-step diagnostics.
#[derive(Debug, Clone)]
pub struct FieldHistory {
    pub grid: GridSpec,
    pub eps: f64,
    pub problem: CroccoProblem,
    pub snapshots: Vec<FieldSnapshot>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl FieldHistory {
    #[inline]
    pub fn at(&self, i: usize, j: usize, n: usize) -> f64 {
        self.snapshots[n].at(i, j)
    }

    /// max over all nodes of |u − f(x, y, t)|.
    pub fn max_deviation(&self, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let g = &self.grid;
        let mut worst: f64 = 0.0;
        for (n, s) in self.snapshots.iter().enumerate() {
            for i in 0..=g.nx {
                for j in 0..=g.ny {
                    worst = worst.max((s.at(i, j) - f(g.x(i), g.y(j), g.t(n))).abs());
                }
            }
        }
        worst
    }

    /// Smallest nodal value over the whole history.
    pub fn min_value(&self) -> f64 {
        self.snapshots
            .iter()
            .flat_map(|s| s.values.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// The values at the nodes of a grid `factor` times coarser in every
    /// direction (every `factor`-th node of this history).
    pub fn coarsened(&self, factor: usize) -> Option<FieldHistory> {
        let g = &self.grid;
        if factor == 0 || g.nx % factor != 0 || g.ny % factor != 0 || g.nt % factor != 0 {
            return None;
        }
        let coarse = GridSpec {
            nx: g.nx / factor,
            ny: g.ny / factor,
            nt: g.nt / factor,
            ..*g
        };
        let snapshots = (0..=coarse.nt)
            .map(|n| {
                let s = &self.snapshots[n * factor];
                let mut values = Vec::with_capacity(coarse.nodes_per_snapshot());
                for i in 0..=coarse.nx {
                    for j in 0..=coarse.ny {
                        values.push(s.at(i * factor, j * factor));
                    }
                }
                FieldSnapshot {
                    time: s.time,
                    eps: s.eps,
                    ny: coarse.ny,
                    values,
                }
            })
            .collect();
        Some(FieldHistory {
            grid: coarse,
            eps: self.eps,
            problem: self.problem.clone(),
            snapshots,
            diagnostics: Vec::new(),
        })
    }

    /// ‖u − v‖_{L¹(Q_T)} by the midpoint rule on every space-time cell
    /// (cell value = mean of the eight corner differences).
    pub fn l1_distance(&self, other: &FieldHistory) -> f64 {
        let g = &self.grid;
        assert_eq!(g, &other.grid, "histories must share a grid");
        let vol = g.dx() * g.dy() * g.dt();
        let mut total = 0.0;
        for n in 0..g.nt {
            let (a0, a1) = (&self.snapshots[n], &self.snapshots[n + 1]);
            let (b0, b1) = (&other.snapshots[n], &other.snapshots[n + 1]);
            for i in 0..g.nx {
                for j in 0..g.ny {
                    let mut s = 0.0;
                    for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                        s += a0.at(i + di, j + dj) - b0.at(i + di, j + dj);
                        s += a1.at(i + di, j + dj) - b1.at(i + di, j + dj);
                    }
                    total += (s / 8.0).abs();
                }
            }
        }
        total * vol
    }
}
