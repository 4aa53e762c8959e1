//! Outer-flow data, hypothesis validation, coefficient assembly and the
//! physical <-> Crocco change of variables.

mod flow;
mod problem;
mod transform;
mod validate;

pub use flow::{pressure_gradient, ExternalFlow, FlowSample, PressureGradient, ScalarFn};
pub use problem::{coefficients, CoefficientFields, CroccoProblem, PointCoefficients, ProblemData};
pub use transform::{from_crocco, from_crocco_profile, to_crocco, CroccoProfile, PhysicalField, PhysicalProfile};
pub use validate::{validate, Condition, ValidationReport, Violation};
