use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A gain value that holds from `t_start` until the next segment begins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t_start: f64,
    pub gain: f64,
}

/// Piecewise temporal gain multiplying the spatial control profile.
///
/// With `ramp_time > 0` each change of gain is a cosine half-wave of that
/// width starting at the segment's `t_start`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    pub segments: Vec<Segment>,
    pub ramp_time: f64,
}

impl ControlSchedule {
    pub fn constant(gain: f64) -> Self {
        ControlSchedule { segments: vec![Segment { t_start: 0.0, gain }], ramp_time: 0.0 }
    }

    /// Schedule from `(t_start, gain)` pairs with instantaneous switches.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        ControlSchedule {
            segments: pairs.iter().map(|&(t_start, gain)| Segment { t_start, gain }).collect(),
            ramp_time: 0.0,
        }
    }

    pub fn with_ramp(mut self, ramp_time: f64) -> Self {
        self.ramp_time = ramp_time;
        self
    }

    /// Structural validation: non-empty, starts at zero, strictly increasing,
    /// ramps shorter than every segment gap.
    pub fn check(&self) -> Result<()> {
        let first = self
            .segments
            .first()
            .ok_or_else(|| Error::InvalidScenario("control schedule has no segments".into()))?;
        if first.t_start != 0.0 {
            return Err(Error::InvalidScenario(format!(
                "first schedule segment must start at t = 0, got {}",
                first.t_start
            )));
        }
        if !(self.ramp_time >= 0.0) || !self.ramp_time.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "ramp_time must be finite and non-negative, got {}",
                self.ramp_time
            )));
        }
        for seg in &self.segments {
            if !seg.gain.is_finite() || !seg.t_start.is_finite() {
                return Err(Error::InvalidScenario("schedule values must be finite".into()));
            }
        }
        for (i, w) in self.segments.windows(2).enumerate() {
            if !(w[1].t_start > w[0].t_start) {
                return Err(Error::InvalidScenario(format!(
                    "schedule start times must be strictly increasing (segment {} at {} follows {})",
                    i + 1,
                    w[1].t_start,
                    w[0].t_start
                )));
            }
            if self.ramp_time > w[1].t_start - w[0].t_start && i > 0 {
                return Err(Error::InvalidScenario(format!(
                    "ramp_time {} exceeds gap between segments {} and {}",
                    self.ramp_time,
                    i,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Gain at time `t` (right-continuous at switches).
    pub fn gain_at(&self, t: f64) -> f64 {
        // Last segment whose start is <= t.
        self.gain_in(self.segments.partition_point(|s| s.t_start <= t).saturating_sub(1), t)
    }

    /// Limit of the gain from below; differs from [`gain_at`](Self::gain_at)
    /// only exactly at an unramped switch.
    pub fn gain_before(&self, t: f64) -> f64 {
        self.gain_in(self.segments.partition_point(|s| s.t_start < t).saturating_sub(1), t)
    }

    fn gain_in(&self, i: usize, t: f64) -> f64 {
        let seg = self.segments[i];
        if i == 0 || self.ramp_time <= 0.0 {
            return seg.gain;
        }
        let u = t - seg.t_start;
        if u >= self.ramp_time {
            return seg.gain;
        }
        let prev = self.segments[i - 1].gain;
        prev + (seg.gain - prev) * 0.5 * (1.0 - (PI * u / self.ramp_time).cos())
    }

    /// ∫₀ᵗ gain(t′) dt′, exact for both constant and ramped pieces.
    pub fn gain_integral(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            if seg.t_start >= t {
                break;
            }
            let end = self.segments.get(i + 1).map_or(t, |n| n.t_start.min(t));
            let span = end - seg.t_start;
            if i > 0 && self.ramp_time > 0.0 {
                let prev = self.segments[i - 1].gain;
                let r = self.ramp_time;
                let u = span.min(r);
                let ramp = prev * u
                    + (seg.gain - prev) * (0.5 * u - r / (2.0 * PI) * (PI * u / r).sin());
                acc += ramp + seg.gain * (span - u);
            } else {
                acc += seg.gain * span;
            }
        }
        acc
    }

    /// Times in `(0, t_end)` at which the gain is non-smooth; the solver
    /// aligns its steps to these.
    pub fn breakpoints(&self, t_end: f64) -> Vec<f64> {
        let mut pts = Vec::new();
        for seg in self.segments.iter().skip(1) {
            pts.push(seg.t_start);
            if self.ramp_time > 0.0 {
                pts.push(seg.t_start + self.ramp_time);
            }
        }
        pts.retain(|&p| p > 0.0 && p < t_end);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Start times of segments whose gain has the opposite sign of the
    /// previous one (a π phase flip of the control).
    pub fn flip_times(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut last_sign = 0.0;
        for seg in &self.segments {
            if seg.gain != 0.0 {
                let s = seg.gain.signum();
                if last_sign != 0.0 && s != last_sign {
                    out.push(seg.t_start);
                }
                last_sign = s;
            }
        }
        out
    }

    pub fn max_abs_gain(&self) -> f64 {
        self.segments.iter().map(|s| s.gain.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gain_lookup() {
        let s = ControlSchedule::from_pairs(&[(0.0, 4.0), (1.0, -1.0), (4.5, 4.0)]);
        assert_eq!(s.gain_at(0.0), 4.0);
        assert_eq!(s.gain_at(0.999), 4.0);
        assert_eq!(s.gain_at(1.0), -1.0);
        assert_eq!(s.gain_at(10.0), 4.0);
        assert_eq!(s.flip_times(), vec![1.0, 4.5]);
    }

    #[test]
    fn malformed_schedules() {
        let decreasing = ControlSchedule::from_pairs(&[(0.0, 1.0), (2.0, -1.0), (1.0, 1.0)]);
        assert!(matches!(decreasing.check(), Err(Error::InvalidScenario(_))));
        let late = ControlSchedule::from_pairs(&[(0.5, 1.0)]);
        assert!(late.check().is_err());
        let empty = ControlSchedule { segments: vec![], ramp_time: 0.0 };
        assert!(empty.check().is_err());
        let long_ramp = ControlSchedule::from_pairs(&[(0.0, 1.0), (1.0, -1.0), (1.5, 1.0)]).with_ramp(0.6);
        assert!(long_ramp.check().is_err());
    }

    #[test]
    fn ramp_is_monotone_and_reaches_target() {
        let s = ControlSchedule::from_pairs(&[(0.0, 1.0), (1.0, -1.0)]).with_ramp(0.2);
        s.check().unwrap();
        let mut prev = s.gain_at(1.0);
        assert_eq!(prev, 1.0);
        for k in 1..=100 {
            let g = s.gain_at(1.0 + 0.2 * k as f64 / 100.0);
            assert!(g <= prev);
            prev = g;
        }
        assert_eq!(s.gain_at(1.2), -1.0);
        assert!((s.gain_at(1.1)).abs() < 1e-14);
    }

    #[test]
    fn integral_matches_quadrature() {
        let s = ControlSchedule::from_pairs(&[(0.0, 2.0), (0.7, -3.0), (1.3, 0.5)]).with_ramp(0.15);
        let n = 200_000;
        let t = 2.0;
        let h = t / n as f64;
        let mut q = 0.0;
        for k in 0..n {
            q += s.gain_at((k as f64 + 0.5) * h) * h;
        }
        assert!((s.gain_integral(t) - q).abs() < 1e-8, "{} vs {q}", s.gain_integral(t));
    }

    #[test]
    fn breakpoints_sorted_within_window() {
        let s = ControlSchedule::from_pairs(&[(0.0, 1.0), (1.0, -1.0), (3.0, 1.0)]).with_ramp(0.1);
        assert_eq!(s.breakpoints(2.0), vec![1.0, 1.1]);
    }
}
