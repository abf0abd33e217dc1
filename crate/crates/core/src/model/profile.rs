use super::MediumParams;
use crate::error::{Error, Result};

/// Spatial shape of the control Rabi frequency along the medium.
///
/// Amplitudes (`b`, `zeta`) are in units of Γ; `z_focus` and `rayleigh` are
/// positions in the same units as [`MediumParams::length`].
#[derive(Debug, Clone, PartialEq)]
pub enum SpatialProfile {
    Uniform { b: f64 },
    GaussianBeam { b: f64, z_focus: f64, rayleigh: f64 },
    Linear { zeta: f64 },
}

impl SpatialProfile {
    /// Profile value at `z`, checked against `[0, L]`.
    pub fn evaluate(&self, z: f64, medium: &MediumParams) -> Result<f64> {
        let len = medium.length;
        if !(0.0..=len).contains(&z) {
            return Err(Error::Domain(format!("z = {z} outside [0, {len}]")));
        }
        Ok(self.rate_at(z, medium.gamma_decay, len))
    }

    /// Unchecked evaluation used on solver grids.
    #[inline]
    pub fn rate_at(&self, z: f64, gamma: f64, length: f64) -> f64 {
        match *self {
            SpatialProfile::Uniform { b } => b * gamma,
            SpatialProfile::GaussianBeam { b, z_focus, rayleigh } => {
                let u = (z - z_focus) / rayleigh;
                b * gamma / (1.0 + u * u).sqrt()
            }
            SpatialProfile::Linear { zeta } => zeta * gamma * z / length,
        }
    }

    /// max over z in [0, L] of |profile(z)|.
    pub fn max_abs(&self, gamma: f64, length: f64) -> f64 {
        let z = self.peak_position(length);
        self.rate_at(z, gamma, length).abs()
    }

    /// Position of the largest |profile| inside the medium.
    pub fn peak_position(&self, length: f64) -> f64 {
        match *self {
            SpatialProfile::Uniform { .. } => length,
            SpatialProfile::GaussianBeam { z_focus, .. } => z_focus.clamp(0.0, length),
            SpatialProfile::Linear { .. } => length,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SpatialProfile::Uniform { .. } => "uniform",
            SpatialProfile::GaussianBeam { .. } => "gaussian_beam",
            SpatialProfile::Linear { .. } => "linear",
        }
    }

    pub(crate) fn check(&self, length: f64) -> Result<()> {
        let ok = match *self {
            SpatialProfile::Uniform { b } => b.is_finite(),
            SpatialProfile::GaussianBeam { b, z_focus, rayleigh } => {
                b.is_finite() && z_focus.is_finite() && rayleigh.is_finite() && rayleigh > 0.0
            }
            SpatialProfile::Linear { zeta } => zeta.is_finite(),
        };
        if !ok {
            return Err(Error::InvalidScenario(format!(
                "{} profile has non-finite amplitude or non-positive Rayleigh length",
                self.kind_name()
            )));
        }
        let _ = length;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn medium() -> MediumParams {
        MediumParams::with_optical_depth(1.0)
    }

    #[test]
    fn uniform_is_flat() {
        let p = SpatialProfile::Uniform { b: 2.0 };
        for z in [0.0, 0.3, 1.0] {
            assert_eq!(p.evaluate(z, &medium()).unwrap(), 2.0);
        }
    }

    #[test]
    fn gaussian_peaks_at_focus() {
        let beta = 3.0;
        let p = SpatialProfile::GaussianBeam { b: 1e7 * beta, z_focus: 1.0, rayleigh: 0.2 };
        assert_eq!(p.evaluate(1.0, &medium()).unwrap(), 1e7 * beta);
        let at_rayleigh = p.evaluate(0.8, &medium()).unwrap();
        assert!((at_rayleigh - 1e7 * beta / 2f64.sqrt()).abs() < 1e-6);
        assert_eq!(p.max_abs(1.0, 1.0), 1e7 * beta);
    }

    #[test]
    fn gaussian_focus_outside_medium() {
        let p = SpatialProfile::GaussianBeam { b: 1.0, z_focus: 2.0, rayleigh: 1.0 };
        assert_eq!(p.peak_position(1.0), 1.0);
        assert!((p.max_abs(1.0, 1.0) - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn linear_midpoint() {
        let p = SpatialProfile::Linear { zeta: 1000.0 };
        assert_eq!(p.evaluate(0.5, &medium()).unwrap(), 500.0);
        assert_eq!(p.evaluate(0.0, &medium()).unwrap(), 0.0);
    }

    #[test]
    fn outside_medium_is_domain_error() {
        let p = SpatialProfile::Uniform { b: 1.0 };
        assert!(matches!(p.evaluate(-1e-9, &medium()), Err(Error::Domain(_))));
        assert!(matches!(p.evaluate(1.5, &medium()), Err(Error::Domain(_))));
        assert!(matches!(p.evaluate(f64::NAN, &medium()), Err(Error::Domain(_))));
    }

    #[test]
    fn amplitudes_are_in_units_of_gamma() {
        let mut m = medium();
        m.gamma_decay = 2.5;
        let p = SpatialProfile::Uniform { b: 4.0 };
        assert_eq!(p.evaluate(0.5, &m).unwrap(), 10.0);
    }
}
