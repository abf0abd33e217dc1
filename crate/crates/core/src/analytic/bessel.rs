//! Bessel functions of the first kind, orders 0 and 1.
//!
//! Miller's backward recurrence normalised by J0 + 2ΣJ2k = 1 below
//! [`ASYMPTOTIC_FROM`], Hankel's asymptotic expansion above it. Absolute
//! error stays below 1e-13 on the real line.

use std::f64::consts::PI;

const ASYMPTOTIC_FROM: f64 = 25.0;
const SERIES_BELOW: f64 = 1e-3;

pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_BELOW {
        let q = 0.25 * ax * ax;
        1.0 - q * (1.0 - 0.25 * q)
    } else if ax < ASYMPTOTIC_FROM {
        miller(ax).0
    } else {
        hankel(0, ax)
    }
}

pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_BELOW {
        let q = 0.25 * ax * ax;
        0.5 * ax * (1.0 - 0.5 * q * (1.0 - q / 6.0))
    } else if ax < ASYMPTOTIC_FROM {
        miller(ax).1
    } else {
        hankel(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// (J0(x), J1(x)) for 0 < x < 25 by backward recurrence.
fn miller(x: f64) -> (f64, f64) {
    let start = x + 40.0 + (40.0 * x).sqrt();
    let mut n = start as usize;
    n += n % 2;
    let two_over_x = 2.0 / x;
    let (mut above, mut cur) = (0.0f64, 1e-30f64);
    let mut sum = 0.0;
    let (mut b0, mut b1) = (0.0, 0.0);
    // cur holds J_k (unnormalised) as k runs from n down to 0.
    for k in (1..=n).rev() {
        let below = k as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            sum *= 1e-250;
            b1 *= 1e-250;
        }
        // cur is now J_{k-1}
        let m = k - 1;
        if m == 1 {
            b1 = cur;
        }
        if m > 0 && m % 2 == 0 {
            sum += 2.0 * cur;
        }
        if m == 0 {
            b0 = cur;
        }
    }
    let norm = b0 + sum;
    (b0 / norm, b1 / norm)
}

fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 0..60u32 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if mag < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * order as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // Reference values to 16 digits.
        let cases = [
            (1.0, 0.765_197_686_557_966_5, 0.440_050_585_744_933_55),
            (2.404_825_557_695_773, 0.0, 0.519_147_497_289_466_6),
            (10.0, -0.245_935_764_451_348_32, 0.043_472_746_168_861_41),
            (30.0, -0.086_367_983_581_040_31, -0.118_751_062_616_623_05),
        ];
        for (x, e0, e1) in cases {
            assert!((j0(x) - e0).abs() < 1e-13, "J0({x}) = {}", j0(x));
            assert!((j1(x) - e1).abs() < 1e-13, "J1({x}) = {}", j1(x));
        }
    }

    #[test]
    fn agrees_with_libm_everywhere() {
        let mut worst: f64 = 0.0;
        for k in 0..200_000 {
            let x = k as f64 * 4e-4 + (k % 7) as f64 * 1.3e-5;
            worst = worst.max((j0(x) - libm::j0(x)).abs());
            worst = worst.max((j1(x) - libm::j1(x)).abs());
        }
        for k in 0..2000 {
            let x = 80.0 + k as f64 * 0.731;
            worst = worst.max((j0(x) - libm::j0(x)).abs());
            worst = worst.max((j1(x) - libm::j1(x)).abs());
        }
        assert!(worst < 1e-12, "max |error| = {worst:e}");
    }

    #[test]
    fn parity_and_origin() {
        assert_eq!(j0(0.0), 1.0);
        assert_eq!(j1(0.0), 0.0);
        for x in [0.3, 4.2, 27.0] {
            assert_eq!(j0(-x), j0(x));
            assert_eq!(j1(-x), -j1(x));
        }
    }

    #[test]
    fn derivative_identity() {
        // J0' = −J1 by central differences.
        for x in [0.5, 3.0, 11.0, 24.9, 25.1, 40.0] {
            let h = 1e-5;
            let d = (j0(x + h) - j0(x - h)) / (2.0 * h);
            assert!((d + j1(x)).abs() < 1e-9, "x = {x}");
        }
    }
}
