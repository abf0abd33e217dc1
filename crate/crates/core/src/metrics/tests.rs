use super::*;
use crate::builtin;
use crate::solver::integrate;

fn gaussian(t: f64, c: f64, kappa: f64) -> f64 {
    let x = (t - c) / kappa;
    (-x * x).exp()
}

fn axis(n: usize, t_end: f64) -> Vec<f64> {
    (0..n).map(|k| k as f64 * t_end / (n - 1) as f64).collect()
}

fn record(times: &[f64], input: &[Complex64], output: &[Complex64]) -> FieldRecord {
    let mut r = FieldRecord::with_capacity(times.len(), 2, times.len() as u64, 0.0);
    for k in 0..times.len() {
        r.push(times[k], input[k], output[k]);
    }
    r
}

#[test]
fn gaussian_intensity_fwhm() {
    let kappa = 5e-3;
    let t = axis(4001, 0.1);
    let i: Vec<f64> = t.iter().map(|&t| gaussian(t, 0.05, kappa).powi(2)).collect();
    let w = fwhm(&t, &i).unwrap();
    let exact = 2.0 * kappa * (0.5 * std::f64::consts::LN_2).sqrt();
    assert!((w - exact).abs() < 1e-3 * exact, "{w} vs {exact}");
    assert!((exact / kappa - 1.177).abs() < 1e-3);
}

#[test]
fn fwhm_failures() {
    let t = axis(101, 1.0);
    let edge: Vec<f64> = t.iter().map(|&t| gaussian(t, 0.0, 0.3)).collect();
    assert!(matches!(fwhm(&t, &edge), Err(Error::Undefined(_))));
    let twin: Vec<f64> = t.iter().map(|&t| gaussian(t, 0.3, 0.03) + 0.9 * gaussian(t, 0.7, 0.03)).collect();
    assert!(matches!(fwhm(&t, &twin), Err(Error::Ambiguous(_))));
    let flat = vec![0.0; 101];
    assert!(fwhm(&t, &flat).is_err());
}

#[test]
fn fwhm_is_invariant_under_scaling() {
    let t = axis(2001, 1.0);
    let i: Vec<f64> = t.iter().map(|&t| gaussian(t, 0.4, 0.05)).collect();
    let w = fwhm(&t, &i).unwrap();
    let scaled: Vec<f64> = i.iter().map(|v| 7.5 * v).collect();
    assert!((fwhm(&t, &scaled).unwrap() - w).abs() < 1e-14);
    let shifted: Vec<f64> = t.iter().map(|&t| gaussian(t, 0.6, 0.05)).collect();
    assert!((fwhm(&t, &shifted).unwrap() - w).abs() < 1e-9);
}

#[test]
fn peak_refinement_between_samples() {
    let t = axis(101, 1.0);
    let i: Vec<f64> = t.iter().map(|&t| gaussian(t, 0.4137, 0.1)).collect();
    let p = find_peak(&t, &i, 0.0, 1.0, 1.0).unwrap();
    assert!((p.time - 0.4137).abs() < 1e-4, "{}", p.time);
}

#[test]
fn fidelity_of_a_delayed_rotated_copy_is_one() {
    let t = axis(4001, 1.0);
    let phase = Complex64::from_polar(0.3, 1.1);
    let input: Vec<Complex64> = t.iter().map(|&t| Complex64::new(gaussian(t, 0.2, 0.02), 0.0)).collect();
    let output: Vec<Complex64> = t.iter().map(|&t| phase * gaussian(t, 0.55, 0.02)).collect();
    let f = classical_fidelity(&t, &input, &output).unwrap();
    assert!((f.normalized - 1.0).abs() < 1e-9, "{}", f.normalized);
    assert!((f.delay - 0.35).abs() < 1e-9, "{}", f.delay);
    assert!((f.unnormalized - 0.09).abs() < 1e-6, "{}", f.unnormalized);
}

#[test]
fn fidelity_penalises_shape_but_not_energy() {
    let t = axis(4001, 1.0);
    let input: Vec<Complex64> = t.iter().map(|&t| Complex64::new(gaussian(t, 0.2, 0.02), 0.0)).collect();
    let wide: Vec<Complex64> = t.iter().map(|&t| Complex64::new(gaussian(t, 0.6, 0.04), 0.0)).collect();
    let f = classical_fidelity(&t, &input, &wide).unwrap();
    // Overlap of Gaussians with widths κ and 2κ: 2·κ·2κ/(κ² + 4κ²) = 0.8.
    assert!((f.normalized - 0.8).abs() < 1e-6, "{}", f.normalized);
    let zero = vec![Complex64::default(); t.len()];
    assert!(classical_fidelity(&t, &input, &zero).is_err());
}

#[test]
fn fidelity_of_disjoint_spectra_vanishes() {
    let t = axis(8001, 1.0);
    let input: Vec<Complex64> = t.iter().map(|&t| Complex64::new(gaussian(t, 0.3, 0.05), 0.0)).collect();
    // Same envelope shifted by 2000 rad/τ in frequency: no delay can overlap them.
    let output: Vec<Complex64> =
        t.iter().map(|&t| Complex64::from_polar(gaussian(t, 0.6, 0.05), 2000.0 * t)).collect();
    let f = classical_fidelity(&t, &input, &output).unwrap();
    assert!(f.normalized < 1e-6, "{}", f.normalized);
}

#[test]
fn storage_efficiency_of_a_delayed_copy() {
    let t = axis(4001, 1.0);
    let input: Vec<Complex64> = t.iter().map(|&t| Complex64::new(gaussian(t, 0.2, 0.02), 0.0)).collect();
    let output: Vec<Complex64> = t.iter().map(|&t| Complex64::new(0.5 * gaussian(t, 0.6, 0.02), 0.0)).collect();
    let r = record(&t, &input, &output);
    let eff = storage_efficiency(&r, 0.35).unwrap();
    assert!((eff - 0.25).abs() < 1e-9, "{eff}");
    // A cut between samples interpolates instead of snapping.
    let eff2 = storage_efficiency(&r, 0.350_1).unwrap();
    assert!((eff2 - eff).abs() < 1e-9);
    assert!(storage_efficiency(&r, 2.0).is_err());
}

#[test]
fn echo_detection_respects_window_and_floor() {
    let t = axis(4001, 1.0);
    let input: Vec<Complex64> = t.iter().map(|&t| Complex64::new(gaussian(t, 0.2, 0.02), 0.0)).collect();
    let output: Vec<Complex64> =
        t.iter().map(|&t| Complex64::new(gaussian(t, 0.2, 0.02) + 0.3 * gaussian(t, 0.7, 0.02), 0.0)).collect();
    let r = record(&t, &input, &output);
    let e = detect_echo(&r, 0.4).unwrap().unwrap();
    assert!((e.time - 0.7).abs() < 1e-6);
    assert!((e.value - 0.09).abs() < 1e-6);
    let silent = record(&t, &input, &input);
    assert!(detect_echo(&silent, 0.5).unwrap().is_none());
}

#[test]
fn eit_reference_values() {
    assert!((eit_baseline(1e4).value - 0.99971).abs() < 1e-12);
    assert!((eit_baseline(2000.0).value - 0.99855).abs() < 1e-12);
    assert!(eit_baseline(2.0).out_of_range);
}

#[test]
fn feasibility_geometry() {
    let base = FeasibilityInput {
        b: 1000.0,
        length_cm: 5.0,
        wavelength_nm: 780.0,
        lifetime_s: RB87_D2_LIFETIME_S,
        geometry: BeamGeometry::GaussianBeam,
    };
    let g = feasibility(base).unwrap();
    let r = g.rayleigh_um.unwrap();
    assert!((r - 50.0).abs() < 1e-3, "{r}");
    assert!((g.spot_area_um2.unwrap() - 0.78 * r).abs() < 1e-9);
    let p = feasibility(FeasibilityInput { geometry: BeamGeometry::Perpendicular, ..base }).unwrap();
    let spot = p.perpendicular_spot_um2.unwrap();
    let exact = std::f64::consts::PI * 5e4 * 5e4 / 1000f64.ln();
    assert!((spot - exact).abs() < 1e-6 * exact);
    assert!(feasibility(FeasibilityInput { b: 1.0, ..base }).is_err());
    // Power scales as b² (intensity) times 1/b (spot).
    let p2 = feasibility(FeasibilityInput { b: 2000.0, ..base }).unwrap().power_w.unwrap();
    let ratio = p2 / g.power_w.unwrap();
    assert!((ratio - 2.0).abs() < 1e-5, "{ratio}");
}

#[test]
fn dispersion_and_delay_bandwidth() {
    assert!(dispersion_flag(1.3, 1.0));
    assert!(!dispersion_flag(1.2, 1.0));
    assert!((delay_bandwidth(3.0, 1.0, 0.5).unwrap() - 4.0).abs() < 1e-15);
    assert!(delay_bandwidth(3.0, 1.0, 0.0).is_err());
}

#[test]
fn evaluate_reports_missing_echo_as_a_note() {
    let mut s = builtin::scenario("fig4b").unwrap();
    s.grid.nz = 32;
    s.grid.t_end = 0.15;
    s.schedule = crate::model::ControlSchedule::constant(1.0);
    s.outputs.echo_after = None;
    let r = integrate(&s).unwrap();
    let m = evaluate(&r, &s).unwrap();
    assert!(m.echo_peak_time.is_none());
    assert!(m.notes.iter().any(|n| n.contains("echo")));
    assert!(m.input_fwhm.is_some() && m.efficiency_r.is_some());
    let json = serde_json::to_value(&m).unwrap();
    assert!(json.get("efficiency_R").is_some());
}
