use super::*;
use crate::model::MediumParams;

fn params(omega_c: f64, eta_z: f64) -> AnalyticParams {
    AnalyticParams { omega_c, eta_z, gamma_decay: 1.0, probe_amp: Complex64::new(1.0, 0.0) }
}

#[test]
fn closed_forms_at_zero_time() {
    let p = params(0.3, 10.0);
    assert_eq!(rho31_closed(&p, 0.0).unwrap(), Complex64::new(0.0, 0.125));
    assert_eq!(rho21_closed(&p, 0.0).unwrap().norm(), 0.0);
    assert!(matches!(probe_closed(&p, 0.0), Err(Error::Singular(_))));
    assert!(matches!(rho31_closed(&p, -1.0), Err(Error::Domain(_))));
    assert!(matches!(two_level_tail(10.0, 1.0, 0.0), Err(Error::Singular(_))));
}

#[test]
fn no_control_leaves_ground_coherence_empty() {
    let p = params(0.0, 10.0);
    for t in [0.1, 1.0, 5.0] {
        assert_eq!(rho21_closed(&p, t).unwrap().norm(), 0.0);
    }
}

#[test]
fn coherences_share_one_envelope() {
    let amp = Complex64::new(0.6, -0.8);
    let p = AnalyticParams { probe_amp: amp, ..params(0.37, 13.0) };
    for k in 0..200 {
        let t = 0.05 * k as f64;
        let a = rho31_closed(&p, t).unwrap().norm_sqr() + rho21_closed(&p, t).unwrap().norm_sqr();
        let env = amp.norm() / 8.0 * j0((13.0 * t).sqrt()) * (-0.25 * t).exp();
        assert!((a - env * env).abs() <= 1e-12 * (env * env).max(1e-300), "t = {t}");
    }
}

#[test]
fn probe_tail_has_the_expected_small_time_limit() {
    // J1(x) ≈ x/2, so the tail → −ηz/8 as T → 0.
    let p = params(0.3, 10.0);
    let tail = probe_closed(&p, 1e-10).unwrap().tail;
    assert!((tail + 10.0 / 8.0).abs() < 1e-8);
    assert_eq!(probe_closed(&p, 1.0).unwrap().delta_weight, 1.0);
}

#[test]
fn validity_ordering() {
    let p = params(0.3, 10.0);
    assert!(p.validity(100.0).holds());
    assert!(!p.validity(0.5).bandwidth_exceeds_decay);
    assert!(!params(2.0, 10.0).validity(100.0).decay_exceeds_control);
}

#[test]
fn two_level_tail_matches_exact_response() {
    let medium = MediumParams::with_optical_depth(20.0);
    let (dt, kappa, t0) = (5e-5, 1e-3, 0.01);
    let n = (5.5 / dt) as usize;
    let input: Vec<Complex64> = (0..n)
        .map(|k| {
            let x = (k as f64 * dt - t0) / kappa;
            Complex64::new((-x * x).exp() / (kappa * std::f64::consts::PI.sqrt()), 0.0)
        })
        .collect();
    let out = spectral_response(&medium, 0.0, 1.0, dt, &input).unwrap();
    let eta = medium.eta();
    let (mut num, mut den) = (0.0, 0.0);
    for (k, (o, i)) in out.probe.iter().zip(&input).enumerate() {
        let big_t = k as f64 * dt - t0;
        if big_t < 0.5 {
            continue;
        }
        let exact = two_level_tail(eta, 1.0, big_t).unwrap();
        num += (o.re - i.re - exact).powi(2) + o.im.powi(2);
        den += exact * exact;
    }
    let err = (num / den).sqrt();
    assert!(err < 1e-3, "relative L2 {err:e}");
}

#[test]
fn spectral_response_of_an_empty_medium_is_the_input() {
    let medium = MediumParams::with_optical_depth(0.0);
    let input: Vec<Complex64> = (0..500).map(|k| Complex64::new((k as f64 * 0.01).sin(), 0.3)).collect();
    let out = spectral_response(&medium, 0.4, 1.0, 0.01, &input).unwrap();
    for (a, b) in input.iter().zip(&out.probe) {
        assert!((a - b).norm() < 1e-10);
    }
    assert!(spectral_response(&medium, 0.4, 1.0, 0.0, &input).is_err());
}

const US: f64 = 1e-6;

fn beam() -> SpatialProfile {
    SpatialProfile::GaussianBeam { b: 1e7, z_focus: 1.0, rayleigh: 0.2 }
}

#[test]
fn phase_area_is_half_the_control_integral() {
    let medium = MediumParams::default();
    let sched = ControlSchedule::from_pairs(&[(0.0, 2.0), (1.8 * US, -2.0)]);
    let a = phase_area(&sched, &beam(), &medium, 1.0, 0.0, 1.0 * US).unwrap();
    assert!((a - 0.5 * 2e7 * 1e-6).abs() < 1e-9);
    assert!(phase_area(&sched, &beam(), &medium, 1.0, 1.0, 0.5).is_err());
    assert!(phase_area(&sched, &beam(), &medium, 1.5, 0.0, 1.0).is_err());
}

#[test]
fn symmetric_flip_echoes_at_twice_the_flip_time() {
    let medium = MediumParams::default();
    let sched = ControlSchedule::from_pairs(&[(0.0, 2.0), (1.8 * US, -2.0)]);
    let t0 = 0.025 * US;
    let t = predict_echo_time(&sched, &beam(), &medium, None, t0, 5.0 * US).unwrap().unwrap();
    assert!((t - (3.6 * US - t0)).abs() < 1e-15, "{t}");
    assert!((t - 3.6 * US).abs() < 0.05 * US);
    // Same answer at any position: the profile factors out of the zero.
    let t_mid = predict_echo_time(&sched, &beam(), &medium, Some(0.3), t0, 5.0 * US).unwrap().unwrap();
    assert!((t_mid - t).abs() < 1e-15);
}

#[test]
fn doubled_reverse_gain_echoes_early() {
    let medium = MediumParams::default();
    let linear = SpatialProfile::Linear { zeta: 1000.0 };
    let sched = ControlSchedule::from_pairs(&[(0.0, 1.0), (0.16, -2.0)]);
    let (t0, tf) = (0.048, 0.16);
    let t = predict_echo_time(&sched, &linear, &medium, None, t0, 1.0).unwrap().unwrap();
    assert!((t - (1.5 * tf - 0.5 * t0)).abs() < 1e-14);
    assert!((t - 0.22).abs() < 0.005);
}

#[test]
fn multi_flip_schedule_crossings() {
    let medium = MediumParams::default();
    let sched = ControlSchedule::from_pairs(&[(0.0, 4.0), (1.0 * US, -1.0), (4.5 * US, 4.0), (6.5 * US, -8.0)]);
    let t0 = 0.55 * US;
    let c = echo_crossings(&sched, &beam(), &medium, None, t0, 8.0 * US).unwrap();
    assert!((c[0] - 2.8 * US).abs() < 1e-12 * US, "{c:?}");
    assert!(c.iter().all(|&t| t > t0));
    // Area after 4.5 μτ: 4·0.45 − 3.5 = −1.7, then +4/μτ → zero at 4.925 μτ.
    assert!((c[1] - 4.925 * US).abs() < 1e-9 * US, "{c:?}");
    assert!(predict_echo_time(&ControlSchedule::constant(1.0), &beam(), &medium, None, 0.0, 1.0)
        .unwrap()
        .is_none());
}

#[test]
fn ramped_crossing_matches_brute_force() {
    let medium = MediumParams::default();
    let sched = ControlSchedule::from_pairs(&[(0.0, 1.0), (1.0, -1.0)]).with_ramp(0.3);
    let t0 = 0.2;
    let t = predict_echo_time(&sched, &SpatialProfile::Uniform { b: 1.0 }, &medium, None, t0, 3.0)
        .unwrap()
        .unwrap();
    // Cosine ramp is antisymmetric about its midpoint, so the zero is at
    // 2·(t_f + r/2) − t0.
    assert!((t - (2.0 * 1.15 - t0)).abs() < 1e-12, "{t}");
    let mut area = 0.0;
    let h = 1e-5;
    let mut s = t0;
    while s < t {
        area += sched.gain_at(s + 0.5 * h) * h;
        s += h;
    }
    assert!(area.abs() < 1e-4);
}

#[test]
fn first_order_signal_uniform_is_cos_squared() {
    let medium = MediumParams::default();
    let p = SpatialProfile::Uniform { b: 3.0 };
    for t in [0.0, 0.4, 1.3, 2.9] {
        let s = first_order_signal(&p, &medium, t, 64).unwrap();
        assert!((s - (1.5 * t).cos().powi(2)).abs() < 1e-12);
    }
    assert!(first_order_signal(&p, &medium, 1.0, 8).is_err());
}

#[test]
fn first_order_signal_linear_is_sinc_squared() {
    let medium = MediumParams::default();
    let zeta = 1000.0;
    let p = SpatialProfile::Linear { zeta };
    for t in [1e-4, 1e-3, 5e-3, 2e-2] {
        let x = 0.5 * zeta * t;
        let exact = (x.sin() / x).powi(2);
        let s = first_order_signal(&p, &medium, t, 4096).unwrap();
        assert!((s - exact).abs() < 1e-9, "T = {t}: {s} vs {exact}");
    }
}

#[test]
fn doubling_the_gradient_halves_the_decay_time() {
    let medium = MediumParams::default();
    let slow = SpatialProfile::Linear { zeta: 500.0 };
    let fast = SpatialProfile::Linear { zeta: 1000.0 };
    for t in [1e-3, 4e-3, 9e-3] {
        let a = first_order_signal(&slow, &medium, t, 2048).unwrap();
        let b = first_order_signal(&fast, &medium, 0.5 * t, 2048).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
    let beta2 = SpatialProfile::GaussianBeam { b: 2e7, z_focus: 1.0, rayleigh: 0.2 };
    let beta4 = SpatialProfile::GaussianBeam { b: 4e7, z_focus: 1.0, rayleigh: 0.2 };
    let a = first_order_signal(&beta2, &medium, 1e-7, 4096).unwrap();
    let b = first_order_signal(&beta4, &medium, 0.5e-7, 4096).unwrap();
    assert!((a - b).abs() < 1e-12);
}
