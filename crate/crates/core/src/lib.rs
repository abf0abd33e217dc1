//! Gradient photon echo simulation in a three-level Λ medium.
//!
//! The probe envelope Ωp(t, z) and the optical and ground-state coherences
//! ρ31, ρ21 are propagated with the Maxwell-Bloch equations in the retarded
//! frame, under a control field whose spatial profile is fixed and whose
//! sign can be switched in time. Flipping the control rephases the spin
//! wave and re-emits the stored probe as an echo.
//!
//! Units: Γ = 1/τ = 1 and L = 1.
//!
//! * [`model`]: medium, control, probe and scenario descriptions
//! * [`solver`]: method-of-lines integrator
//! * [`analytic`]: closed forms, phase area and exact oracles
//! * [`metrics`]: echo detection, efficiency, fidelity, feasibility
//! * [`sweep`]: parallel, checkpointed parameter sweeps
//! * [`config`], [`builtin`]: TOML scenarios and the shipped ones

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod builtin;
pub mod config;
pub mod error;
pub mod metrics;
pub mod model;
pub mod solver;
pub mod sweep;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use metrics::EchoMetrics;
pub use model::{
    ControlSchedule, MediumParams, Outputs, ProbePulse, ProbeShape, Scenario, Segment,
    SpatialProfile, TraceKind,
};
pub use solver::{integrate, FieldRecord, GridSpec, SolverLimits};
