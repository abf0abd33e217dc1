//! Closed-form and semi-analytic descriptions of the probe response.
//!
//! Three families live here:
//!
//! * the approximate Bessel-beat forms for a constant control and a
//!   δ-like probe ([`rho31_closed`], [`rho21_closed`], [`probe_closed`]);
//! * phase-area bookkeeping for switched controls, which predicts when
//!   the ground-state spin wave rephases ([`phase_area`],
//!   [`predict_echo_time`]) and the first-order scattering signal
//!   ([`first_order_signal`]);
//! * exact linear-response solutions for a constant control
//!   ([`two_level_tail`], [`spectral_response`]) used to check the solver.
//!
//! None of these call into the solver.

pub mod bessel;
mod spectral;

pub use spectral::{spectral_response, SpectralFields};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ControlSchedule, MediumParams, SpatialProfile};
use bessel::{j0, j1};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Inputs of the closed forms at a fixed position z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticParams {
    /// Constant control Rabi frequency (1/τ).
    pub omega_c: f64,
    /// Product ηz (1/τ).
    pub eta_z: f64,
    pub gamma_decay: f64,
    pub probe_amp: Complex64,
}

/// Which parts of the validity ordering bandwidth > Γ > Ωc hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Validity {
    pub bandwidth_exceeds_decay: bool,
    pub decay_exceeds_control: bool,
}

impl Validity {
    pub fn holds(&self) -> bool {
        self.bandwidth_exceeds_decay && self.decay_exceeds_control
    }
}

impl AnalyticParams {
    pub fn validity(&self, probe_bandwidth: f64) -> Validity {
        Validity {
            bandwidth_exceeds_decay: probe_bandwidth > self.gamma_decay,
            decay_exceeds_control: self.gamma_decay > self.omega_c.abs(),
        }
    }

    fn envelope(&self, t: f64) -> f64 {
        j0((self.eta_z * t).sqrt()) * (-0.25 * self.gamma_decay * t).exp()
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("T must be non-negative, got {t}")));
    }
    Ok(())
}

/// i(Ωp0/8)·J0(√(ηzT))·e^{−ΓT/4}·cos(ΩcT/2).
pub fn rho31_closed(p: &AnalyticParams, t: f64) -> Result<Complex64> {
    check_time(t)?;
    Ok(I * p.probe_amp * (0.125 * p.envelope(t) * (0.5 * p.omega_c * t).cos()))
}

/// −(Ωp0/8)·J0(√(ηzT))·e^{−ΓT/4}·sin(ΩcT/2).
pub fn rho21_closed(p: &AnalyticParams, t: f64) -> Result<Complex64> {
    check_time(t)?;
    Ok(-p.probe_amp * (0.125 * p.envelope(t) * (0.5 * p.omega_c * t).sin()))
}

/// Closed-form transmitted probe normalised by Ωp0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeClosed {
    /// −¼√(ηz/T)·J1(√(ηzT))·e^{−ΓT/4}·cos(ΩcT/2)
    pub tail: f64,
    /// Weight of the forward δ(T) component; it is never evaluated
    /// numerically and is carried by the incident pulse instead.
    pub delta_weight: f64,
}

pub fn probe_closed(p: &AnalyticParams, t: f64) -> Result<ProbeClosed> {
    check_time(t)?;
    if t == 0.0 {
        return Err(Error::Singular("probe tail diverges at T = 0 (δ(T) term)".into()));
    }
    let arg = (p.eta_z * t).sqrt();
    let tail = -0.25 * (p.eta_z / t).sqrt()
        * j1(arg)
        * (-0.25 * p.gamma_decay * t).exp()
        * (0.5 * p.omega_c * t).cos();
    Ok(ProbeClosed { tail, delta_weight: 1.0 })
}

/// Exact impulse-response tail of a resonant two-level medium (no control):
/// −√(ηz/(2T))·J1(√(2ηzT))·e^{−ΓT/2}, normalised by the δ weight.
pub fn two_level_tail(eta_z: f64, gamma_decay: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Err(Error::Singular("two-level tail evaluated at T = 0".into()));
    }
    let a = 0.5 * eta_z;
    Ok(-(a / t).sqrt() * j1(2.0 * (a * t).sqrt()) * (-0.5 * gamma_decay * t).exp())
}

/// ½∫_{t0}^{t} Ωc(t′, z) dt′.
pub fn phase_area(
    schedule: &ControlSchedule,
    profile: &SpatialProfile,
    medium: &MediumParams,
    z: f64,
    t0: f64,
    t: f64,
) -> Result<f64> {
    if !(t >= t0) {
        return Err(Error::Domain(format!("phase area needs t >= t0, got t = {t}, t0 = {t0}")));
    }
    let omega = profile.evaluate(z, medium)?;
    Ok(0.5 * omega * (schedule.gain_integral(t) - schedule.gain_integral(t0)))
}

const RAMP_SUBDIVISIONS: usize = 32;

/// Every time in (t0, t_end] at which the phase area at `z_ref` returns to
/// zero, in increasing order. `z_ref = None` uses the control focus.
pub fn echo_crossings(
    schedule: &ControlSchedule,
    profile: &SpatialProfile,
    medium: &MediumParams,
    z_ref: Option<f64>,
    t0: f64,
    t_end: f64,
) -> Result<Vec<f64>> {
    let z = z_ref.unwrap_or_else(|| profile.peak_position(medium.length));
    // Validates z as a side effect.
    profile.evaluate(z, medium)?;
    if !(t_end > t0) {
        return Ok(Vec::new());
    }
    let g0 = schedule.gain_integral(t0);
    let area = |t: f64| schedule.gain_integral(t) - g0;

    let mut knots = vec![t0];
    let ramp = schedule.ramp_time;
    for seg in schedule.segments.iter().skip(1) {
        if ramp > 0.0 {
            for k in 0..=RAMP_SUBDIVISIONS {
                knots.push(seg.t_start + ramp * k as f64 / RAMP_SUBDIVISIONS as f64);
            }
        } else {
            knots.push(seg.t_start);
        }
    }
    knots.push(t_end);
    knots.retain(|&t| t >= t0 && t <= t_end);
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    let mut out = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (area(a), area(b));
        if fb == 0.0 && b > t0 {
            if out.last() != Some(&b) {
                out.push(b);
            }
        } else if fa != 0.0 && fa.signum() != fb.signum() {
            out.push(bisect(&area, a, b, fa));
        }
    }
    Ok(out)
}

/// Root of a continuous function with a sign change on [a, b].
fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Earliest phase-area zero crossing after the last control flip.
///
/// `None` when the schedule never flips or the crossing lies beyond `t_end`.
pub fn predict_echo_time(
    schedule: &ControlSchedule,
    profile: &SpatialProfile,
    medium: &MediumParams,
    z_ref: Option<f64>,
    t0: f64,
    t_end: f64,
) -> Result<Option<f64>> {
    let Some(&last_flip) = schedule.flip_times().last() else {
        return Ok(None);
    };
    let after = last_flip.max(t0);
    Ok(echo_crossings(schedule, profile, medium, z_ref, t0, t_end)?
        .into_iter()
        .find(|&t| t > after))
}

/// |∫₀ᴸ cos(Ωc(z)T/2) dz|² / L² by composite Simpson quadrature.
pub fn first_order_signal(
    profile: &SpatialProfile,
    medium: &MediumParams,
    t: f64,
    nquad: usize,
) -> Result<f64> {
    check_time(t)?;
    if nquad < 16 {
        return Err(Error::Domain(format!("nquad must be at least 16, got {nquad}")));
    }
    let n = nquad + nquad % 2;
    let len = medium.length;
    let h = len / n as f64;
    let f = |z: f64| (0.5 * profile.rate_at(z, medium.gamma_decay, len) * t).cos();
    let mut sum = f(0.0) + f(len);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(k as f64 * h);
    }
    let integral = sum * h / 3.0;
    Ok((integral / len).powi(2))
}

#[cfg(test)]
mod tests;
