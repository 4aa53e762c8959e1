//! Semi-implicit time stepping of the ε-regularized degenerate
//! ultra-parabolic problem on Q_T = (0,L)×(0,1)×(0,T):
//!
//! ```text
//! ∂t u − (u+ε)² ∂²y u + (a+ε) ∂x u + b ∂y u + c u = f
//! u|t=0 = w0,  u|x=0 = w1,  u|y=1 = 0,
//! (u+ε) ∂y u|y=0 = v0 (u+ε) + ∂xP/U.
//! ```
//!
//! Diffusion is implicit in y with the coefficient frozen at the previous
//! level, transport is explicit first-order upwind, the reaction term is
//! implicit, and the wall node is fixed each step by a scalar Newton solve.

mod history;
mod step;
mod sweep;
pub mod tridiag;

pub use history::{FieldHistory, FieldSnapshot, StepDiagnostics};
pub use step::{solve, step, Forcing};
pub use sweep::{viscosity_sweep, ConvergenceTable, SweepRow};

/// Maximum Newton iterations for the wall condition.
pub const MAX_NEWTON_ITERATIONS: usize = 50;

/// First-order upwind difference for transport speed `v`: backward when
/// `v > 0`, forward otherwise.
#[inline]
pub fn upwind(v: f64, back: f64, here: f64, fwd: f64, h: f64) -> f64 {
    if v > 0.0 {
        v * (here - back) / h
    } else {
        v * (fwd - here) / h
    }
}
