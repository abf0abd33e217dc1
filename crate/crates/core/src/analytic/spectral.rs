use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::model::MediumParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Fields at one position from the exact linear response.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFields {
    pub probe: Vec<Complex64>,
    pub rho31: Vec<Complex64>,
    pub rho21: Vec<Complex64>,
}

/// Exact response of the medium to an arbitrary boundary probe when the
/// control is constant in space and time.
///
/// For components e^{st} the Bloch equations give
/// ρ31 = (i/2)Ωp/D(s), D(s) = s + Γ/2 + iΔp + (Ωc²/4)/(s − i(Δc−Δp) + γ),
/// and propagation gives Ωp(s, z) = Ωp(s, 0)·exp(−ηz/(2D(s))). The input is
/// sampled uniformly from t = 0 with spacing `dt` and assumed to vanish
/// before t = 0. The transform runs on a zero-padded grid along the line
/// Re s = σ; σ is chosen so that wrap-around of slowly decaying responses
/// is suppressed by e^{−15} on the returned window.
pub fn spectral_response(
    medium: &MediumParams,
    omega_c: f64,
    z: f64,
    dt: f64,
    input: &[Complex64],
) -> Result<SpectralFields> {
    if input.is_empty() || !(dt > 0.0) {
        return Err(Error::Domain("spectral response needs samples and dt > 0".into()));
    }
    let n = input.len();
    let n_fft = (2 * n).next_power_of_two();
    let span = n_fft as f64 * dt;
    let sigma = 30.0 / span;

    let mut buf: Vec<Complex64> = (0..n_fft)
        .map(|k| if k < n { input[k] * (-sigma * k as f64 * dt).exp() } else { Complex64::default() })
        .collect();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n_fft);
    let inv = planner.plan_fft_inverse(n_fft);
    fwd.process(&mut buf);

    let eta_z = medium.eta() * z;
    let half_gamma = 0.5 * medium.damping();
    let ground = Complex64::new(medium.gamma_ground, -(medium.delta_c - medium.delta_p));
    let quarter_oc2 = 0.25 * omega_c * omega_c;
    let mut p31 = vec![Complex64::default(); n_fft];
    let mut p21 = vec![Complex64::default(); n_fft];
    for k in 0..n_fft {
        let kk = if k <= n_fft / 2 { k as f64 } else { k as f64 - n_fft as f64 };
        let omega = 2.0 * std::f64::consts::PI * kk / span;
        let s = Complex64::new(sigma, omega);
        let s_ground = s + ground;
        let d = s + half_gamma + I * medium.delta_p + quarter_oc2 / s_ground;
        let out = buf[k] * (-eta_z / (2.0 * d)).exp();
        let r31 = 0.5 * I * out / d;
        p31[k] = r31;
        p21[k] = 0.5 * I * omega_c * r31 / s_ground;
        buf[k] = out;
    }
    let back = |mut v: Vec<Complex64>| -> Vec<Complex64> {
        inv.process(&mut v);
        let scale = 1.0 / n_fft as f64;
        v.truncate(n);
        v.iter()
            .enumerate()
            .map(|(k, c)| c * scale * (sigma * k as f64 * dt).exp())
            .collect()
    };
    Ok(SpectralFields { probe: back(buf), rho31: back(p31), rho21: back(p21) })
}
