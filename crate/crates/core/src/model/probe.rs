use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeShape {
    /// Ωp0·exp[−((t−t0)/κ)²].
    Gaussian,
    /// Unit-area Gaussian of width κ scaled by Ωp0, standing in for Ωp0·δ(t−t0).
    RegularizedDelta,
}

/// Boundary value of the weak probe at the entrance face z = 0.
///
/// The Maxwell-Bloch system is linear in the probe, so the amplitude only
/// sets the scale of every output.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePulse {
    pub amplitude: Complex64,
    pub center_time: f64,
    pub kappa: f64,
    pub shape: ProbeShape,
}

impl ProbePulse {
    pub fn gaussian(amplitude: Complex64, center_time: f64, kappa: f64) -> Self {
        ProbePulse { amplitude, center_time, kappa, shape: ProbeShape::Gaussian }
    }

    pub fn regularized_delta(amplitude: Complex64, center_time: f64, width: f64) -> Self {
        ProbePulse { amplitude, center_time, kappa: width, shape: ProbeShape::RegularizedDelta }
    }

    /// Peak of the boundary envelope.
    pub fn peak_amplitude(&self) -> Complex64 {
        match self.shape {
            ProbeShape::Gaussian => self.amplitude,
            ProbeShape::RegularizedDelta => {
                self.amplitude / (self.kappa * std::f64::consts::PI.sqrt())
            }
        }
    }

    #[inline]
    pub fn boundary(&self, t: f64) -> Complex64 {
        let x = (t - self.center_time) / self.kappa;
        self.peak_amplitude() * (-x * x).exp()
    }

    /// Time at which the boundary envelope first exceeds `fraction` of its peak.
    pub fn leading_edge(&self, fraction: f64) -> f64 {
        self.center_time - self.kappa * (-fraction.ln()).sqrt()
    }

    pub(crate) fn check(&self) -> Result<()> {
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "probe width kappa must be positive, got {}",
                self.kappa
            )));
        }
        if !self.center_time.is_finite() || !self.amplitude.re.is_finite() || !self.amplitude.im.is_finite() {
            return Err(Error::InvalidScenario("probe parameters must be finite".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_boundary_value() {
        let p = ProbePulse::gaussian(Complex64::new(2.0, 0.0), 1.0, 0.5);
        assert_eq!(p.boundary(1.0), Complex64::new(2.0, 0.0));
        let v = p.boundary(1.5);
        assert!((v.re - 2.0 * (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn regularized_delta_has_unit_area() {
        let p = ProbePulse::regularized_delta(Complex64::new(1.0, 0.0), 0.0, 1e-3);
        let n = 20_000;
        let h = 2e-2 / n as f64;
        let area: f64 = (0..n).map(|k| p.boundary(-1e-2 + (k as f64 + 0.5) * h).re * h).sum();
        assert!((area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn leading_edge_threshold() {
        let p = ProbePulse::gaussian(Complex64::new(1.0, 0.0), 10.0, 1.0);
        let t = p.leading_edge(1e-12);
        assert!((p.boundary(t).norm() - 1e-12).abs() < 1e-20);
    }
}
