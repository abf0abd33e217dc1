//! Scalar diagnostics of a [`FieldRecord`]: pulse widths, echo peaks,
//! storage efficiency, classical fidelity, and the experimental
//! feasibility estimates for the control beam.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Scenario, TraceKind};
use crate::solver::FieldRecord;

/// Secondary maxima above this fraction of the peak make a width ambiguous.
pub const AMBIGUITY_FRACTION: f64 = 0.8;
/// Echoes weaker than this fraction of the input peak intensity are ignored.
pub const ECHO_FLOOR: f64 = 1e-10;
/// Echo broader than the input by more than this factor counts as dispersed.
pub const DISPERSION_RATIO: f64 = 1.25;

/// Full width at half maximum of a sampled intensity trace.
///
/// Crossings are located by linear interpolation between samples.
pub fn fwhm(times: &[f64], intensity: &[f64]) -> Result<f64> {
    if times.len() != intensity.len() || times.len() < 3 {
        return Err(Error::Undefined("fwhm needs at least three paired samples".into()));
    }
    let (peak_idx, peak) = argmax(intensity);
    if !(peak > 0.0) {
        return Err(Error::Undefined("trace has no positive maximum".into()));
    }
    let half = 0.5 * peak;
    let mut lo = peak_idx;
    while lo > 0 && intensity[lo] >= half {
        lo -= 1;
    }
    let mut hi = peak_idx;
    while hi + 1 < intensity.len() && intensity[hi] >= half {
        hi += 1;
    }
    if intensity[lo] >= half || intensity[hi] >= half {
        return Err(Error::Undefined("half maximum is not bracketed inside the trace".into()));
    }
    let secondary = intensity[..lo]
        .iter()
        .chain(&intensity[hi + 1..])
        .fold(0.0f64, |m, &v| m.max(v));
    if secondary > AMBIGUITY_FRACTION * peak {
        return Err(Error::Ambiguous(format!(
            "secondary maximum at {:.1}% of the peak outside the main lobe",
            100.0 * secondary / peak
        )));
    }
    let cross = |a: usize, b: usize| {
        let (ia, ib) = (intensity[a], intensity[b]);
        times[a] + (half - ia) * (times[b] - times[a]) / (ib - ia)
    };
    Ok(cross(hi - 1, hi) - cross(lo, lo + 1))
}

fn argmax(v: &[f64]) -> (usize, f64) {
    v.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &x)| if x > bv { (i, x) } else { (bi, bv) })
}

/// Location and height of an echo maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EchoPeak {
    pub time: f64,
    pub value: f64,
}

/// Largest intensity sample with `after < t < before`, refined by a
/// parabola through its neighbours. `None` when it does not rise above
/// `ECHO_FLOOR · reference`.
pub fn find_peak(
    times: &[f64],
    intensity: &[f64],
    after: f64,
    before: f64,
    reference: f64,
) -> Option<EchoPeak> {
    let start = times.partition_point(|&t| t <= after);
    let end = times.partition_point(|&t| t < before);
    if start >= end {
        return None;
    }
    let (rel, value) = argmax(&intensity[start..end]);
    if !(value > ECHO_FLOOR * reference) {
        return None;
    }
    let k = start + rel;
    if k > start && k + 1 < end {
        let (y0, y1, y2) = (intensity[k - 1], intensity[k], intensity[k + 1]);
        let (t0, t1, t2) = (times[k - 1], times[k], times[k + 1]);
        let denom = y0 - 2.0 * y1 + y2;
        let uniform = ((t1 - t0) - (t2 - t1)).abs() <= 1e-9 * (t2 - t0);
        if denom < 0.0 && uniform {
            let h = t1 - t0;
            let shift = 0.5 * (y0 - y2) / denom;
            let peak = y1 - 0.25 * (y0 - y2) * shift;
            return Some(EchoPeak { time: t1 + shift * h, value: peak });
        }
    }
    Some(EchoPeak { time: times[k], value })
}

/// Echo in |Ωp(t, L)|² after `after`.
pub fn detect_echo(record: &FieldRecord, after: f64) -> Result<Option<EchoPeak>> {
    detect_echo_in(record, TraceKind::Transmitted, after, f64::INFINITY)
}

/// Echo in the chosen trace within `(after, before)`.
pub fn detect_echo_in(
    record: &FieldRecord,
    kind: TraceKind,
    after: f64,
    before: f64,
) -> Result<Option<EchoPeak>> {
    let t_end = *record.times.last().ok_or_else(|| Error::Undefined("empty record".into()))?;
    if !(after < t_end) {
        return Err(Error::Domain(format!("echo search start {after} is not before t_end {t_end}")));
    }
    let reference = record.input_intensity().into_iter().fold(0.0, f64::max);
    Ok(find_peak(&record.times, &record.intensity(kind), after, before, reference))
}

/// FWHM of the chosen trace restricted to `(after, before)`.
pub fn window_fwhm(record: &FieldRecord, kind: TraceKind, after: f64, before: f64) -> Result<f64> {
    let start = record.times.partition_point(|&t| t <= after);
    let end = record.times.partition_point(|&t| t < before);
    let intensity = record.intensity(kind);
    fwhm(&record.times[start..end], &intensity[start..end])
}

fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// ∫_{t_cut}^{t_end} |Ωp(t, L)|² dt / ∫ |Ωp(t, 0)|² dt, trapezoidal.
pub fn storage_efficiency(record: &FieldRecord, t_cut: f64) -> Result<f64> {
    let (t_first, t_last) = match (record.times.first(), record.times.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::Undefined("empty record".into())),
    };
    if !(t_cut >= t_first && t_cut <= t_last) {
        return Err(Error::Domain(format!("t_cut = {t_cut} outside record [{t_first}, {t_last}]")));
    }
    let input = trapezoid(&record.times, &record.input_intensity());
    if !(input > 0.0) {
        return Err(Error::Undefined("input pulse carries no energy".into()));
    }
    let out = record.output_intensity();
    let k = record.times.partition_point(|&t| t < t_cut);
    let mut ts = Vec::with_capacity(record.len() - k + 1);
    let mut vs = Vec::with_capacity(ts.capacity());
    if k > 0 && record.times[k] > t_cut {
        let (ta, tb) = (record.times[k - 1], record.times[k]);
        let w = (t_cut - ta) / (tb - ta);
        ts.push(t_cut);
        vs.push(out[k - 1] + w * (out[k] - out[k - 1]));
    }
    ts.extend_from_slice(&record.times[k..]);
    vs.extend_from_slice(&out[k..]);
    Ok(trapezoid(&ts, &vs) / input)
}

/// Delay-optimised overlap between an input and a retrieved pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fidelity {
    /// max over delay of |∫ out*(t) in(t − d) dt|² / (∫|in|² ∫|out|²).
    pub normalized: f64,
    /// Same overlap divided by (∫|in|²)²; includes amplitude mismatch.
    pub unnormalized: f64,
    /// Delay d at the optimum.
    pub delay: f64,
}

/// Classical fidelity of two traces sampled on the same time axis.
pub fn classical_fidelity(times: &[f64], input: &[Complex64], output: &[Complex64]) -> Result<Fidelity> {
    if times.len() != input.len() || times.len() != output.len() || times.len() < 2 {
        return Err(Error::Undefined("fidelity needs paired traces of equal length".into()));
    }
    let e_in = trapezoid(times, &input.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>());
    let e_out = trapezoid(times, &output.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>());
    if !(e_in > 0.0) || !(e_out > 0.0) {
        return Err(Error::Undefined("zero-energy trace".into()));
    }
    let n = times.len();
    let span = times[n - 1] - times[0];
    let dt = span / (n - 1) as f64;
    let a = resample(times, input, dt, n);
    let b = resample(times, output, dt, n);

    // c[m] = Σ_k conj(b[k]) a[k − m]; circular with enough zero padding.
    let n_fft = (2 * n).next_power_of_two();
    let mut fa: Vec<Complex64> = a.into_iter().chain(std::iter::repeat(Complex64::default())).take(n_fft).collect();
    let mut fb: Vec<Complex64> = b.into_iter().chain(std::iter::repeat(Complex64::default())).take(n_fft).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n_fft).process(&mut fa);
    planner.plan_fft_forward(n_fft).process(&mut fb);
    let mut prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x.conj() * y).collect();
    planner.plan_fft_inverse(n_fft).process(&mut prod);
    // prod[m] = Σ_k conj(a[k]) b[k + m]·n_fft, i.e. the conjugate of c at delay m.
    let (best, overlap) = prod
        .iter()
        .enumerate()
        .map(|(m, c)| (m, c.norm_sqr()))
        .fold((0, 0.0f64), |acc, x| if x.1 > acc.1 { x } else { acc });
    let overlap = overlap * (dt / n_fft as f64).powi(2);
    let lag = if best <= n_fft / 2 { best as f64 } else { best as f64 - n_fft as f64 };
    Ok(Fidelity {
        normalized: (overlap / (e_in * e_out)).min(1.0),
        unnormalized: overlap / (e_in * e_in),
        delay: lag * dt,
    })
}

fn resample(times: &[f64], values: &[Complex64], dt: f64, n: usize) -> Vec<Complex64> {
    let t0 = times[0];
    let mut j = 0;
    (0..n)
        .map(|k| {
            let t = t0 + k as f64 * dt;
            while j + 2 < times.len() && times[j + 1] < t {
                j += 1;
            }
            let (ta, tb) = (times[j], times[j + 1]);
            let w = ((t - ta) / (tb - ta)).clamp(0.0, 1.0);
            values[j] + (values[j + 1] - values[j]) * w
        })
        .collect()
}

/// Optimal EIT retrieval efficiency 1 − 2.9/ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EitBaseline {
    pub value: f64,
    /// Set when ξ ≤ 2.9 and the formula does not apply.
    pub out_of_range: bool,
}

pub fn eit_baseline(xi: f64) -> EitBaseline {
    if xi > 2.9 {
        EitBaseline { value: 1.0 - 2.9 / xi, out_of_range: false }
    } else {
        EitBaseline { value: 0.0, out_of_range: true }
    }
}

/// Control-beam geometry for [`feasibility`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamGeometry {
    /// Beam focused along the medium axis; the gradient comes from its Rayleigh range.
    GaussianBeam,
    /// Beam crossing the medium at 90°; the gradient comes from its transverse profile.
    Perpendicular,
}

/// Inputs to the laser-requirement estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityInput {
    /// Focal control Rabi frequency in units of Γ.
    pub b: f64,
    pub length_cm: f64,
    pub wavelength_nm: f64,
    /// Excited-state lifetime τ in seconds.
    pub lifetime_s: f64,
    pub geometry: BeamGeometry,
}

/// 87Rb D2 excited-state lifetime.
pub const RB87_D2_LIFETIME_S: f64 = 26.24e-9;
/// Focal intensity coefficient: c·ε0·|Ec|² = 1e-17·(b/τ)² W·s²/cm² for a
/// 1e-29 C·m dipole.
pub const INTENSITY_COEFF_W_S2_PER_CM2: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub input: FeasibilityInput,
    /// c·ε0·|Ec|² at the focus (W/cm²).
    pub focal_intensity_w_per_cm2: f64,
    /// Rayleigh length r from bΓ/√(1+(L/r)²) = Γ (μm).
    pub rayleigh_um: Option<f64>,
    /// Focal spot λr (μm²).
    pub spot_area_um2: Option<f64>,
    /// K = ½·c·ε0·|Ec|²·λ·r (W).
    pub power_w: Option<f64>,
    /// Waist w from bΓ·exp[−(L/w)²] = Γ (μm).
    pub waist_um: Option<f64>,
    /// πw² = πL²/ln b (μm²).
    pub perpendicular_spot_um2: Option<f64>,
}

pub fn feasibility(input: FeasibilityInput) -> Result<FeasibilityReport> {
    let FeasibilityInput { b, length_cm, wavelength_nm, lifetime_s, geometry } = input;
    if !(b > 1.0) {
        return Err(Error::Domain(format!("b must exceed 1 for a finite beam size, got {b}")));
    }
    if !(length_cm > 0.0 && wavelength_nm > 0.0 && lifetime_s > 0.0) {
        return Err(Error::Domain("length, wavelength and lifetime must be positive".into()));
    }
    let intensity = INTENSITY_COEFF_W_S2_PER_CM2 * (b / lifetime_s).powi(2);
    let length_um = length_cm * 1e4;
    let mut report = FeasibilityReport {
        input,
        focal_intensity_w_per_cm2: intensity,
        rayleigh_um: None,
        spot_area_um2: None,
        power_w: None,
        waist_um: None,
        perpendicular_spot_um2: None,
    };
    match geometry {
        BeamGeometry::GaussianBeam => {
            let r_um = length_um / (b * b - 1.0).sqrt();
            let spot_um2 = wavelength_nm * 1e-3 * r_um;
            report.rayleigh_um = Some(r_um);
            report.spot_area_um2 = Some(spot_um2);
            report.power_w = Some(0.5 * intensity * spot_um2 * 1e-8);
        }
        BeamGeometry::Perpendicular => {
            let ln_b = b.ln();
            report.waist_um = Some(length_um / ln_b.sqrt());
            report.perpendicular_spot_um2 = Some(std::f64::consts::PI * length_um * length_um / ln_b);
        }
    }
    Ok(report)
}

/// (echo peak time − input peak time) / echo FWHM.
pub fn delay_bandwidth(echo_peak_time: f64, input_peak_time: f64, echo_fwhm: f64) -> Result<f64> {
    if !(echo_fwhm > 0.0) {
        return Err(Error::Undefined("echo width must be positive".into()));
    }
    Ok((echo_peak_time - input_peak_time) / echo_fwhm)
}

/// Echo broader than the input by more than [`DISPERSION_RATIO`].
pub fn dispersion_flag(echo_fwhm: f64, input_fwhm: f64) -> bool {
    echo_fwhm > DISPERSION_RATIO * input_fwhm
}

/// Per-run diagnostics; absent values serialise as `null`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EchoMetrics {
    pub echo_peak_time: Option<f64>,
    pub echo_peak_value: Option<f64>,
    pub echo_fwhm: Option<f64>,
    pub echo_half_duration: Option<f64>,
    #[serde(rename = "efficiency_R")]
    pub efficiency_r: Option<f64>,
    pub efficiency_t_cut: Option<f64>,
    pub efficiency_t_end: Option<f64>,
    pub fidelity: Option<f64>,
    pub fidelity_unnormalized: Option<f64>,
    pub delay_bandwidth: Option<f64>,
    pub input_peak_time: Option<f64>,
    pub input_fwhm: Option<f64>,
    /// FWHM of the whole chosen trace (forward signal when nothing flips).
    pub signal_fwhm: Option<f64>,
    pub dispersion_flag: Option<bool>,
    /// Reasons for any missing value.
    pub notes: Vec<String>,
}

/// Evaluate every metric the scenario's protocol supports.
pub fn evaluate(record: &FieldRecord, scenario: &Scenario) -> Result<EchoMetrics> {
    if record.len() < 3 {
        return Err(Error::Undefined("record too short for metrics".into()));
    }
    let kind = scenario.outputs.trace;
    let mut m = EchoMetrics::default();
    let note = |m: &mut EchoMetrics, what: &str, e: Error| m.notes.push(format!("{what}: {e}"));

    let input_intensity = record.input_intensity();
    let (k_in, _) = argmax(&input_intensity);
    let input_peak_time = record.times[k_in];
    m.input_peak_time = Some(input_peak_time);
    match fwhm(&record.times, &input_intensity) {
        Ok(w) => m.input_fwhm = Some(w),
        Err(e) => note(&mut m, "input_fwhm", e),
    }
    match fwhm(&record.times, &record.intensity(kind)) {
        Ok(w) => m.signal_fwhm = Some(w),
        Err(e) => note(&mut m, "signal_fwhm", e),
    }

    let t_cut = scenario.efficiency_cut();
    match storage_efficiency(record, t_cut) {
        Ok(r) => {
            m.efficiency_r = Some(r);
            m.efficiency_t_cut = Some(t_cut);
            m.efficiency_t_end = record.times.last().copied();
        }
        Err(e) => note(&mut m, "efficiency_R", e),
    }

    let Some(after) = scenario.echo_after() else {
        m.notes.push("echo: no control flip and no echo_after configured".into());
        return Ok(m);
    };
    let peak = match detect_echo_in(record, kind, after, f64::INFINITY) {
        Ok(Some(p)) => p,
        Ok(None) => {
            m.notes.push("echo: nothing above the noise floor".into());
            return Ok(m);
        }
        Err(e) => {
            note(&mut m, "echo", e);
            return Ok(m);
        }
    };
    m.echo_peak_time = Some(peak.time);
    m.echo_peak_value = Some(peak.value);
    match window_fwhm(record, kind, after, f64::INFINITY) {
        Ok(w) => {
            m.echo_fwhm = Some(w);
            m.echo_half_duration = Some(0.5 * w);
            if let Ok(db) = delay_bandwidth(peak.time, input_peak_time, w) {
                m.delay_bandwidth = Some(db);
            }
            if let Some(w_in) = m.input_fwhm {
                m.dispersion_flag = Some(dispersion_flag(w, w_in));
            }
        }
        Err(e) => note(&mut m, "echo_fwhm", e),
    }
    let retrieved: Vec<Complex64> = record
        .field(kind)
        .into_iter()
        .zip(&record.times)
        .map(|(c, &t)| if t >= after { c } else { Complex64::default() })
        .collect();
    match classical_fidelity(&record.times, &record.probe_in, &retrieved) {
        Ok(f) => {
            m.fidelity = Some(f.normalized);
            m.fidelity_unnormalized = Some(f.unnormalized);
        }
        Err(e) => note(&mut m, "fidelity", e),
    }
    Ok(m)
}

#[cfg(test)]
mod tests;
