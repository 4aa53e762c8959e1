//! Vanishing-viscosity solver and estimate-verification laboratory for the
//! two-dimensional unsteady Prandtl boundary-layer system written in Crocco
//! variables.
//!
//! The crate is organised around five pieces:
//!
//! * [`crocco`]: outer-flow data, hypothesis validation, coefficient assembly
//!   and the physical <-> Crocco change of variables.
//! * [`solver`]: a semi-implicit scheme for the ε-regularized degenerate
//!   ultra-parabolic problem, with a nonlinear Robin wall condition.
//! * [`estimates`]: discrete versions of every functional the existence,
//!   uniqueness and stability theory bounds.
//! * [`kolmogorov`]: the constant-coefficient Kolmogorov kernel, cut-off
//!   geometry and measured regularity estimates for rough coefficients.
//! * [`config`], [`scenario`] and [`acceptance`]: run configuration, named
//!   experiments and the acceptance-suite runner used by the CLI.

pub mod acceptance;
pub mod config;
pub mod crocco;
pub mod error;
pub mod estimates;
pub mod grid;
pub mod kolmogorov;
pub mod mms;
pub mod par;
pub mod quadrature;
pub mod scenario;
pub mod solver;
pub mod table;

pub use error::{Error, Result};
pub use grid::GridSpec;
pub use par::Execution;

/// Crate version, stamped into every artifact header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Artifact header line shared by every file the CLI writes.
pub fn artifact_header(scenario: &str, grid: &GridSpec, eps: f64) -> String {
    format!(
        "# crocco-prandtl {} {} {} {}",
        VERSION,
        scenario,
        grid.label(),
        eps
    )
}
