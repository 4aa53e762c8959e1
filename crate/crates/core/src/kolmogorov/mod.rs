//! Regularity laboratory for the Kolmogorov-type model operator
//! ∂t − ∂y(a ∂y) + y∂x: its fundamental solution, cut-offs, and measured
//! density, Poincaré and oscillation estimates on rough-coefficient runs.

pub mod cutoff;
pub mod geometry;
pub mod kernel;
pub mod lab;
pub mod rough;

pub use cutoff::{certify, CutoffCertificate, CutoffCheck, CutoffSpec};
pub use geometry::{BoxKind, ParabolicBox};
pub use kernel::{d_eta_log_gamma0, dilation_defect, gamma0, gamma0_as_printed, l0_residual, normalization, KernelPoint};
pub use lab::{
    density_ratio, log_subsolution, normalize_for_density, oscillation_table, poincare_measurement,
    weak_poincare_ratio, DensityReport, DensityRow, DensitySpec, LogTransform, MeanValueRule, OscillationRow,
    OscillationTable, PoincareMeasurement, PoincareOutcome, PoincareRatio,
};
pub use rough::{gamma0_consistency, model_scenarios, rough_initial, solve_rough, RoughCoefficient, RoughField, RoughGrid};
