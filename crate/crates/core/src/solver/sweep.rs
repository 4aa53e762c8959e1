use super::step::{solve, Forcing};
use crate::crocco::CroccoProblem;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::par::Execution;

/// One row of a vanishing-viscosity sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eps_hi: f64,
    pub eps_lo: f64,
    /// ‖u^{eps_hi} − u^{eps_lo}‖_{L¹(Q_T)}, or the failure message.
    pub l1_diff: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<SweepRow>,
}

impl ConvergenceTable {
    /// Differences in row order, `None` if any row failed.
    pub fn differences(&self) -> Option<Vec<f64>> {
        self.rows.iter().map(|r| r.l1_diff.clone().ok()).collect()
    }

    /// True when every row succeeded and differences decrease strictly.
    pub fn strictly_decreasing(&self) -> bool {
        match self.differences() {
            Some(d) => d.windows(2).all(|w| w[1] < w[0]),
            None => false,
        }
    }

    pub fn to_csv(&self, header: &str) -> String {
        let mut s = format!("{header}\neps_hi,eps_lo,l1_diff\n");
        for r in &self.rows {
            let v = match &r.l1_diff {
                Ok(d) => format!("{d:.16e}"),
                Err(_) => "failed".to_string(),
            };
            s.push_str(&format!("{:.16e},{:.16e},{v}\n", r.eps_hi, r.eps_lo));
        }
        s
    }
}

/// Solves for each viscosity in `eps_list` (run in parallel) and tabulates
/// L¹(Q_T) distances between consecutive solutions. A failed solve marks
/// the rows that need it as failed; the sweep continues.
pub fn viscosity_sweep(
    problem: &CroccoProblem,
    grid: &GridSpec,
    eps_list: &[f64],
    exec: Execution,
) -> Result<ConvergenceTable> {
    if eps_list.iter().any(|&e| !(e > 0.0)) || eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Parameter(format!(
            "eps_list {eps_list:?} must be positive and strictly decreasing"
        )));
    }
    let runs = exec.map_slice(eps_list, |&eps| solve(problem, grid, eps, &Forcing::none(), exec));
    let rows = eps_list
        .windows(2)
        .zip(runs.windows(2))
        .map(|(e, r)| SweepRow {
            eps_hi: e[0],
            eps_lo: e[1],
            l1_diff: match (&r[0], &r[1]) {
                (Ok(a), Ok(b)) => Ok(a.l1_distance(b)),
                (Err(err), _) | (_, Err(err)) => Err(err.to_string()),
            },
        })
        .collect();
    Ok(ConvergenceTable { rows })
}
