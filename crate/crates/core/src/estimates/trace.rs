use crate::solver::FieldHistory;

/// Sup and L¹ norms of a residual along one boundary line.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LineResidual {
    pub sup: f64,
    pub l1: f64,
}

impl LineResidual {
    fn add(&mut self, r: f64, measure: f64) {
        self.sup = self.sup.max(r.abs());
        self.l1 += r.abs() * measure;
    }
}

/// Boundary residuals of a history.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceReport {
    /// u_y − v0 − (∂xP/U)/u on y = 0.
    pub wall: LineResidual,
    /// (u+ε)u_y − v0(u+ε) − ∂xP/U on y = 0, the condition the scheme imposes.
    pub wall_regularized: LineResidual,
    /// u − w0 on t = 0.
    pub initial: LineResidual,
    /// u − w1 on x = 0.
    pub inflow: LineResidual,
    /// u on y = 1.
    pub top: LineResidual,
    /// Wall nodes where u ≤ 1e-300 and the first residual was skipped.
    pub degenerate: usize,
}

/// Evaluates every trace condition. Wall gradients use the one-sided
/// second-order stencil; wall residuals cover the nodes the scheme
/// determines (x > 0, t > 0).
pub fn trace_residual(h: &FieldHistory) -> TraceReport {
    let g = &h.grid;
    let (dx, dy, dt) = (g.dx(), g.dy(), g.dt());
    let pb = &h.problem;
    let mut rep = TraceReport::default();
    for (n, s) in h.snapshots.iter().enumerate() {
        let t = g.t(n);
        if n > 0 {
            for i in 1..=g.nx {
                let x = g.x(i);
                let u0 = s.at(i, 0);
                let slope = (-3.0 * u0 + 4.0 * s.at(i, 1) - s.at(i, 2)) / (2.0 * dy);
                let v0 = pb.v0(x, t);
                let px = pb.flow.eval(x, t).px_over_u();
                let reg = (u0 + h.eps) * (slope - v0) - px;
                rep.wall_regularized.add(reg, dx * dt);
                if u0 <= 1e-300 {
                    rep.degenerate += 1;
                } else {
                    rep.wall.add(slope - v0 - px / u0, dx * dt);
                }
            }
            for j in 0..=g.ny {
                rep.inflow.add(s.at(0, j) - pb.w1(g.y(j), t), dy * dt);
            }
        }
        for i in 0..=g.nx {
            rep.top.add(s.at(i, g.ny), dx * dt);
        }
    }
    let s = &h.snapshots[0];
    for i in 0..=g.nx {
        for j in 0..=g.ny {
            rep.initial.add(s.at(i, j) - pb.w0(g.x(i), g.y(j)), dx * dy);
        }
    }
    rep
}
