//! Domain types for the three-level Λ medium and the fields that drive it.
//!
//! Units: rates are in units of the excited-state decay rate Γ = 1/τ, times
//! in τ, positions in units of the medium length. With the defaults
//! (`gamma_decay = 1`, `length = 1`) every number is directly in those units.

mod probe;
mod profile;
mod scenario;
mod schedule;

pub use probe::{ProbePulse, ProbeShape};
pub use profile::SpatialProfile;
pub use scenario::{
    scale_scenario, validate_scenario, Diagnostic, Outputs, Scenario, Severity, TraceKind,
    ValidationReport,
};
pub use schedule::{ControlSchedule, Segment};

use crate::error::{Error, Result};

/// Atomic medium and detunings.
///
/// The coupling constant η = Γξ/(2L) is always derived from the stored
/// fields. `spontaneous_decay = false` drops the −Γ/2 damping of ρ31 while
/// keeping η, which isolates the time-scaling symmetry in tests.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumParams {
    pub gamma_decay: f64,
    pub gamma_ground: f64,
    pub delta_p: f64,
    pub delta_c: f64,
    pub xi: f64,
    pub length: f64,
    pub spontaneous_decay: bool,
}

impl MediumParams {
    /// Resonant medium of optical depth `xi` with Γ = 1 and L = 1.
    pub fn with_optical_depth(xi: f64) -> Self {
        MediumParams {
            gamma_decay: 1.0,
            gamma_ground: 0.0,
            delta_p: 0.0,
            delta_c: 0.0,
            xi,
            length: 1.0,
            spontaneous_decay: true,
        }
    }

    pub fn eta(&self) -> f64 {
        self.gamma_decay * self.xi / (2.0 * self.length)
    }

    /// Damping rate Γ actually applied to ρ31.
    pub fn damping(&self) -> f64 {
        if self.spontaneous_decay {
            self.gamma_decay
        } else {
            0.0
        }
    }

    pub fn check(&self) -> Result<()> {
        let finite = [
            self.gamma_decay,
            self.gamma_ground,
            self.delta_p,
            self.delta_c,
            self.xi,
            self.length,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidScenario("medium parameters must be finite".into()));
        }
        if self.gamma_decay <= 0.0 {
            return Err(Error::InvalidScenario(format!(
                "gamma_decay must be positive, got {}",
                self.gamma_decay
            )));
        }
        if self.xi < 0.0 {
            return Err(Error::InvalidScenario(format!("xi must be non-negative, got {}", self.xi)));
        }
        if self.length <= 0.0 {
            return Err(Error::InvalidScenario(format!(
                "length must be positive, got {}",
                self.length
            )));
        }
        if self.gamma_ground < 0.0 {
            return Err(Error::InvalidScenario("gamma_ground must be non-negative".into()));
        }
        Ok(())
    }
}

impl Default for MediumParams {
    fn default() -> Self {
        MediumParams::with_optical_depth(0.0)
    }
}

/// Control Rabi frequency Ωc(t, z) = gain(t)·profile(z) in units of 1/τ.
///
/// The sign of the result carries the control phase (0 or π).
pub fn evaluate_control(
    profile: &SpatialProfile,
    schedule: &ControlSchedule,
    medium: &MediumParams,
    t: f64,
    z: f64,
) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    Ok(schedule.gain_at(t) * profile.evaluate(z, medium)?)
}
