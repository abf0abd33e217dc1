use super::{ControlSchedule, MediumParams, ProbePulse, SpatialProfile};
use crate::error::{Error, Result};
use crate::solver::GridSpec;

/// Which intensity trace scalar diagnostics are taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    /// |Ωp(t, L)|².
    Transmitted,
    /// |Ωp(t, L) − Ωp(t, 0)|²: the field radiated by the medium.
    Scattered,
}

impl TraceKind {
    pub fn name(self) -> &'static str {
        match self {
            TraceKind::Transmitted => "transmitted",
            TraceKind::Scattered => "scattered",
        }
    }
}

/// Requested observables and the protocol times metrics need.
#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    /// Record coherence snapshots every this many recorded samples (0 = none).
    pub snapshot_stride: usize,
    /// Keep every n-th spatial node in snapshots.
    pub snapshot_z_stride: usize,
    pub trace: TraceKind,
    /// Echo search starts after this time; defaults to the first control flip.
    pub echo_after: Option<f64>,
    /// Lower limit of the storage-efficiency output integral.
    pub efficiency_cut: Option<f64>,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            snapshot_stride: 0,
            snapshot_z_stride: 8,
            trace: TraceKind::Transmitted,
            echo_after: None,
            efficiency_cut: None,
        }
    }
}

/// A complete simulation setup.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub medium: MediumParams,
    pub profile: SpatialProfile,
    pub schedule: ControlSchedule,
    pub probe: ProbePulse,
    pub grid: GridSpec,
    pub outputs: Outputs,
}

impl Scenario {
    /// max over t, z of |Ωc(t, z)|.
    pub fn max_control(&self) -> f64 {
        self.schedule.max_abs_gain() * self.profile.max_abs(self.medium.gamma_decay, self.medium.length)
    }

    /// Step size the solver targets: the configured one, or
    /// `min(0.1 / max|Ωc|, κ/20)`.
    pub fn target_dt(&self) -> f64 {
        self.grid.dt.unwrap_or_else(|| {
            let omega = self.max_control();
            let by_probe = self.probe.kappa / 20.0;
            if omega > 0.0 {
                (0.1 / omega).min(by_probe)
            } else {
                by_probe
            }
        })
    }

    /// Echo search start: explicit, else the first control flip.
    pub fn echo_after(&self) -> Option<f64> {
        self.outputs.echo_after.or_else(|| self.schedule.flip_times().first().copied())
    }

    /// Storage-efficiency cut: explicit, else three probe widths after its center.
    pub fn efficiency_cut(&self) -> f64 {
        self.outputs
            .efficiency_cut
            .unwrap_or(self.probe.center_time + 3.0 * self.probe.kappa)
    }

    /// Structural checks shared by validation and the solver.
    pub fn check_structure(&self) -> Result<()> {
        self.medium.check()?;
        self.profile.check(self.medium.length)?;
        self.schedule.check()?;
        self.probe.check()?;
        self.grid.check()?;
        if self.outputs.snapshot_z_stride == 0 {
            return Err(Error::InvalidScenario("snapshot_z_stride must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Warning)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }

    fn push(&mut self, severity: Severity, code: &'static str, message: String) {
        self.diagnostics.push(Diagnostic { severity, code, message });
    }
}

// Slack for floating-point round-off in the resolution inequalities.
const RESOLUTION_SLACK: f64 = 1.0 + 1e-9;

/// Check a scenario's physics regime and numerical resolution.
///
/// Structural defects are a hard `Err`; under-resolution is reported as an
/// error diagnostic; regime violations are warnings.
pub fn validate_scenario(s: &Scenario) -> Result<ValidationReport> {
    s.check_structure()?;
    let mut report = ValidationReport::default();
    let gamma = s.medium.gamma_decay;
    let omega_max = s.max_control();
    let kappa = s.probe.kappa;
    let dt = s.target_dt();

    if dt * omega_max > 0.1 * RESOLUTION_SLACK {
        report.push(
            Severity::Error,
            "dt-control",
            format!("dt·max|Ωc| = {:.3e} exceeds 0.1 (dt = {dt:e}, max|Ωc| = {omega_max:e})", dt * omega_max),
        );
    }
    if dt > kappa / 20.0 * RESOLUTION_SLACK {
        report.push(
            Severity::Error,
            "dt-probe",
            format!("dt = {dt:e} exceeds κ/20 = {:e}", kappa / 20.0),
        );
    }

    let bandwidth = 1.0 / kappa;
    if !(bandwidth > omega_max && omega_max > gamma) {
        report.push(
            Severity::Warning,
            "broadband-ordering",
            format!(
                "broadband ordering κ⁻¹ > max|Ωc| > Γ violated: κ⁻¹ = {bandwidth:e}, max|Ωc| = {omega_max:e}, Γ = {gamma:e}"
            ),
        );
    }

    let ramp = s.schedule.ramp_time;
    if ramp > 0.0 && omega_max > 0.0 {
        // bΓ = max|Ωc| with τ = 1/Γ gives τ/b = 1/max|Ωc|.
        let limit = 1.0 / omega_max;
        if ramp > limit {
            report.push(
                Severity::Warning,
                "ramp-too-slow",
                format!("ramp time {ramp:e} exceeds τ/b = {limit:e}"),
            );
        }
    }

    if s.medium.spontaneous_decay && gamma * s.grid.t_end > 0.1 {
        report.push(
            Severity::Warning,
            "decay-window",
            format!(
                "simulated window Γ·t_end = {:.3} is not small; spontaneous decay is significant",
                gamma * s.grid.t_end
            ),
        );
    }

    Ok(report)
}

/// Apply the time-scaling map: Ωc → fΩc, ξ → fξ, every time → t/f.
///
/// Detunings and the ground-state decoherence are rates and scale with the
/// control; Γ and L are fixed.
pub fn scale_scenario(s: &Scenario, factor: f64) -> Result<Scenario> {
    if !(factor > 0.0) || !factor.is_finite() {
        return Err(Error::Domain(format!("scale factor must be positive, got {factor}")));
    }
    let mut out = s.clone();
    out.medium.xi *= factor;
    out.medium.delta_p *= factor;
    out.medium.delta_c *= factor;
    out.medium.gamma_ground *= factor;
    for seg in &mut out.schedule.segments {
        seg.gain *= factor;
        seg.t_start /= factor;
    }
    out.schedule.ramp_time /= factor;
    out.probe.center_time /= factor;
    out.probe.kappa /= factor;
    if let Some(dt) = out.grid.dt.as_mut() {
        *dt /= factor;
    }
    out.grid.t_end /= factor;
    if let Some(t) = out.outputs.echo_after.as_mut() {
        *t /= factor;
    }
    if let Some(t) = out.outputs.efficiency_cut.as_mut() {
        *t /= factor;
    }
    Ok(out)
}
