use crate::crocco::ExternalFlow;
use crate::error::{Error, Result};
use crate::solver::FieldHistory;

/// Empirical constant ĉ₆ of the L¹ stability estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StabilityConstant {
    /// max LHS(t)/RHS(t) over levels t > 0 with RHS > 0.
    Ratio(f64),
    /// Identical data and identical solutions.
    ExactMatch,
    /// LHS > 0 where RHS = 0.
    Unbounded,
}

impl StabilityConstant {
    pub fn value(&self) -> f64 {
        match self {
            StabilityConstant::Ratio(c) => *c,
            StabilityConstant::ExactMatch => 0.0,
            StabilityConstant::Unbounded => f64::INFINITY,
        }
    }

    pub fn label(&self) -> String {
        match self {
            StabilityConstant::Ratio(c) => format!("{c}"),
            StabilityConstant::ExactMatch => "exact-match".to_string(),
            StabilityConstant::Unbounded => "unbounded".to_string(),
        }
    }

    /// Level 0 is skipped: there the inflow column already carries w1(·, 0)
    /// while no inflow time has accumulated, a line of measure zero in
    /// the continuum.
    fn from_series(lhs: &[f64], rhs: &[f64]) -> Self {
        let mut c: f64 = 0.0;
        let mut any_rhs = false;
        for (l, r) in lhs.iter().zip(rhs).skip(1) {
            if *r > 0.0 {
                any_rhs = true;
                c = c.max(l / r);
            } else if *l > 0.0 {
                return StabilityConstant::Unbounded;
            }
        }
        if any_rhs {
            StabilityConstant::Ratio(c)
        } else {
            StabilityConstant::ExactMatch
        }
    }
}

/// LHS(t_n) = ∫∫|u_A − u_B| and the data terms at every time level.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub initial_term: f64,
    pub inflow_term: Vec<f64>,
    pub suction_term: Vec<f64>,
    pub constant: StabilityConstant,
}

fn check_pair(a: &FieldHistory, b: &FieldHistory) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::Parameter(format!(
            "runs use different grids ({} and {})",
            a.grid.label(),
            b.grid.label()
        )));
    }
    if a.eps != b.eps {
        return Err(Error::Parameter(format!("runs use different eps ({} and {})", a.eps, b.eps)));
    }
    Ok(())
}

/// Measures ‖u_A(t) − u_B(t)‖_{L¹} against the initial, inflow and suction
/// data differences accumulated up to t. Data come from each run's problem.
pub fn l1_stability(a: &FieldHistory, b: &FieldHistory) -> Result<StabilityReport> {
    check_pair(a, b)?;
    let g = &a.grid;
    let (dx, dy, dt) = (g.dx(), g.dy(), g.dt());
    let (pa, pb) = (&a.problem, &b.problem);

    let lhs: Vec<f64> = (0..=g.nt)
        .map(|n| {
            let (sa, sb) = (&a.snapshots[n], &b.snapshots[n]);
            let mut total = 0.0;
            for i in 0..g.nx {
                for j in 0..g.ny {
                    let d = sa.at(i, j) - sb.at(i, j) + sa.at(i + 1, j) - sb.at(i + 1, j) + sa.at(i, j + 1)
                        - sb.at(i, j + 1)
                        + sa.at(i + 1, j + 1)
                        - sb.at(i + 1, j + 1);
                    total += 0.25 * d.abs();
                }
            }
            total * dx * dy
        })
        .collect();

    let mut initial_term = 0.0;
    for i in 0..g.nx {
        let xc = g.x(i) + 0.5 * dx;
        for j in 0..g.ny {
            let yc = g.y(j) + 0.5 * dy;
            initial_term += (pa.w0(xc, yc) - pb.w0(xc, yc)).abs();
        }
    }
    initial_term *= dx * dy;

    let mut inflow_term = vec![0.0];
    let mut suction_term = vec![0.0];
    for n in 0..g.nt {
        let tc = g.t(n) + 0.5 * dt;
        let inflow: f64 = (0..g.ny)
            .map(|j| {
                let yc = g.y(j) + 0.5 * dy;
                (pa.w1(yc, tc) - pb.w1(yc, tc)).abs()
            })
            .sum();
        let suction: f64 = (0..g.nx)
            .map(|i| {
                let xc = g.x(i) + 0.5 * dx;
                (pa.v0(xc, tc) - pb.v0(xc, tc)).abs()
            })
            .sum();
        inflow_term.push(inflow_term[n] + inflow * dy * dt);
        suction_term.push(suction_term[n] + suction * dx * dt);
    }
    let rhs: Vec<f64> = (0..=g.nt)
        .map(|n| initial_term + inflow_term[n] + suction_term[n])
        .collect();
    let constant = StabilityConstant::from_series(&lhs, &rhs);
    Ok(StabilityReport {
        lhs,
        rhs,
        initial_term,
        inflow_term,
        suction_term,
        constant,
    })
}

/// Physical-variable stability: the distance ∫∫|∂yu₁(y) − ∂yu₂(ỹ)|·∂yu₁/U² dy dx
/// between two runs, with ỹ matched by equal velocity, evaluated through
/// the inverse Crocco map of each η-cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalStability {
    /// Distance at every time level.
    pub distance: Vec<f64>,
    /// Initial, inflow and suction data terms accumulated up to each level.
    pub data: Vec<f64>,
    /// max distance/data over levels with nonzero data.
    pub constant: StabilityConstant,
}

/// Physical shear on each η-cell of a Crocco column: ∂y u = U Δη/Δy with
/// Δy from the trapezoid inverse map; the cell touching η = 1 lies at
/// y = ∞ and carries zero shear.
fn cell_shear(col: &[f64], d_eta: f64, u_ext: f64) -> Result<Vec<f64>> {
    let m = col.len() - 1;
    (0..m)
        .map(|j| {
            if j + 1 == m && col[m] <= 0.0 {
                return Ok(0.0);
            }
            if !(col[j] > 0.0 && col[j + 1] > 0.0) {
                return Err(Error::Transform(format!(
                    "w = {} is not positive below the free stream",
                    col[j].min(col[j + 1])
                )));
            }
            let dy = 0.5 * d_eta * (1.0 / col[j] + 1.0 / col[j + 1]);
            Ok(u_ext * d_eta / dy)
        })
        .collect()
}

/// ∫|∂yu_A − ∂yu_B| ∂yu_A/U² dy for one column pair; with Δy_A ∂yu_A = U Δη
/// this is Σ |∂yu_A − ∂yu_B| Δη / U.
fn column_distance(a: &[f64], b: &[f64], d_eta: f64, u_ext: f64) -> Result<f64> {
    let sa = cell_shear(a, d_eta, u_ext)?;
    let sb = cell_shear(b, d_eta, u_ext)?;
    Ok(sa.iter().zip(&sb).map(|(p, q)| (p - q).abs()).sum::<f64>() * d_eta / u_ext)
}

pub fn physical_stability(a: &FieldHistory, b: &FieldHistory, flow: &ExternalFlow) -> Result<PhysicalStability> {
    check_pair(a, b)?;
    let g = &a.grid;
    let (dx, dy, dt) = (g.dx(), g.dy(), g.dt());
    let dist_at = |n: usize| -> Result<f64> {
        let t = g.t(n);
        let mut total = 0.0;
        for i in 0..=g.nx {
            let w = if i == 0 || i == g.nx { 0.5 } else { 1.0 };
            let ue = flow.eval(g.x(i), t).u;
            total += w * column_distance(a.snapshots[n].column(i), b.snapshots[n].column(i), dy, ue)?;
        }
        Ok(total * dx)
    };
    let distance = (0..=g.nt).map(dist_at).collect::<Result<Vec<f64>>>()?;

    let mut data = vec![distance[0]];
    let mut acc = distance[0];
    for n in 0..g.nt {
        let mut step = 0.0;
        for m in [n, n + 1] {
            let ue = flow.eval(0.0, g.t(m)).u;
            step += 0.5 * column_distance(a.snapshots[m].column(0), b.snapshots[m].column(0), dy, ue)?;
        }
        let tc = g.t(n) + 0.5 * dt;
        let suction: f64 = (0..g.nx)
            .map(|i| {
                let xc = g.x(i) + 0.5 * dx;
                (a.problem.v0(xc, tc) - b.problem.v0(xc, tc)).abs()
            })
            .sum();
        acc += step * dt + suction * dx * dt;
        data.push(acc);
    }
    let constant = StabilityConstant::from_series(&distance, &data);
    Ok(PhysicalStability {
        distance,
        data,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::tests::history_from;
    use crate::grid::GridSpec;

    #[test]
    fn identical_runs_match_exactly() {
        let g = GridSpec::new(8, 8, 8, 1.0, 0.5).unwrap();
        let h = history_from(&g, |_, y, t| (1.0 - y) * (1.0 + t));
        let r = l1_stability(&h, &h).unwrap();
        assert_eq!(r.constant, StabilityConstant::ExactMatch);
        assert_eq!(r.constant.label(), "exact-match");
        assert!(r.lhs.iter().all(|&v| v == 0.0));
        let p = physical_stability(&h, &h, &h.problem.flow).unwrap();
        assert_eq!(p.constant, StabilityConstant::ExactMatch);
    }

    #[test]
    fn grid_mismatch_is_a_parameter_error() {
        let a = history_from(&GridSpec::new(8, 8, 8, 1.0, 0.5).unwrap(), |_, y, _| 1.0 - y);
        let b = history_from(&GridSpec::new(8, 16, 8, 1.0, 0.5).unwrap(), |_, y, _| 1.0 - y);
        assert!(matches!(l1_stability(&a, &b), Err(Error::Parameter(_))));
    }

    #[test]
    fn lhs_without_data_difference_is_unbounded() {
        let g = GridSpec::new(8, 8, 8, 1.0, 0.5).unwrap();
        let a = history_from(&g, |_, y, _| 1.0 - y);
        let b = history_from(&g, |_, y, t| (1.0 - y) * (1.0 + t));
        assert_eq!(l1_stability(&a, &b).unwrap().constant, StabilityConstant::Unbounded);
    }

    #[test]
    fn scaled_profile_distance_at_time_zero() {
        // w and 2w: shear doubles, the distance at t = 0 is the data term.
        let g = GridSpec::new(8, 16, 8, 1.0, 0.5).unwrap();
        let a = history_from(&g, |_, y, _| 1.0 - y);
        let b = history_from(&g, |_, y, _| 2.0 * (1.0 - y));
        let p = physical_stability(&a, &b, &a.problem.flow).unwrap();
        assert_eq!(p.distance[0], p.data[0]);
        // Crocco side: ∫∫|w − 2w| dη dx = 1/2 up to the top cell.
        assert!((p.distance[0] - 0.5).abs() < 2.0 * g.dy(), "{}", p.distance[0]);
    }
}
