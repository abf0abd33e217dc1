//! Maxwell-Bloch integration on a 1D space-time grid in the retarded frame.
//!
//! With T = t − z/c the propagation equation loses its time derivative and
//! becomes ∂z Ωp = iη ρ31 at fixed T. The Bloch equations for ρ31 and ρ21
//! are advanced at every grid node with classical RK4; at each RK stage the
//! probe along the medium is rebuilt from the stage value of ρ31 by
//! cumulative trapezoidal integration from the entrance boundary, so the
//! field and the coherences stay consistent within a step.

mod record;

pub use record::{FieldRecord, Snapshots};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Scenario;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Spatial and temporal discretisation.
///
/// `dt = None` selects `min(0.1/max|Ωc|, κ/20)`; `record_stride = None`
/// keeps at most [`MAX_DEFAULT_RECORDS`] output samples.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub nz: usize,
    pub dt: Option<f64>,
    pub t_end: f64,
    pub record_stride: Option<usize>,
}

pub const DEFAULT_NZ: usize = 1024;
pub const MAX_DEFAULT_RECORDS: u64 = 100_000;

impl GridSpec {
    pub fn new(nz: usize, t_end: f64) -> Self {
        GridSpec { nz, dt: None, t_end, record_stride: None }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }

    pub fn with_record_stride(mut self, stride: usize) -> Self {
        self.record_stride = Some(stride);
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.nz < 2 {
            return Err(Error::InvalidScenario(format!("nz must be at least 2, got {}", self.nz)));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidScenario(format!("t_end must be positive, got {}", self.t_end)));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(Error::InvalidScenario(format!("dt must be positive, got {dt}")));
            }
            if !(self.t_end > dt) {
                return Err(Error::InvalidScenario(format!(
                    "t_end = {} must exceed dt = {dt}",
                    self.t_end
                )));
            }
        }
        if self.record_stride == Some(0) {
            return Err(Error::InvalidScenario("record_stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// Budgets guarding a single run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverLimits {
    pub max_steps: u64,
    pub max_output_bytes: u64,
    /// Abort when any |ρ| exceeds this.
    pub divergence_threshold: f64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_steps: 200_000_000,
            max_output_bytes: 2 << 30,
            divergence_threshold: 10.0,
        }
    }
}

/// Step layout: each interval between control breakpoints is split into an
/// integer number of equal steps no longer than the target dt.
#[derive(Debug, Clone)]
struct StepPlan {
    intervals: Vec<(f64, f64, u64)>,
    total: u64,
    max_step: f64,
}

impl StepPlan {
    fn new(s: &Scenario, refine: u32) -> Self {
        let dt = s.target_dt();
        let t_end = s.grid.t_end;
        let mut edges = vec![0.0];
        edges.extend(s.schedule.breakpoints(t_end));
        edges.push(t_end);
        let mult = 1u64 << refine;
        let mut intervals = Vec::with_capacity(edges.len() - 1);
        let mut total = 0;
        let mut max_step: f64 = 0.0;
        for w in edges.windows(2) {
            let span = w[1] - w[0];
            // Tolerate round-off so that scaled scenarios get identical counts.
            let n = ((span / dt) * (1.0 - 1e-9)).ceil().max(1.0) as u64 * mult;
            total += n;
            max_step = max_step.max(span / n as f64);
            intervals.push((w[0], w[1], n));
        }
        StepPlan { intervals, total, max_step }
    }
}

struct Workspace {
    k31: [Vec<Complex64>; 4],
    k21: [Vec<Complex64>; 4],
    t31: Vec<Complex64>,
    t21: Vec<Complex64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        let z = || vec![Complex64::default(); n];
        Workspace {
            k31: [z(), z(), z(), z()],
            k21: [z(), z(), z(), z()],
            t31: z(),
            t21: z(),
        }
    }
}

/// Precomputed coefficients of the Bloch equations on the grid.
struct System<'a> {
    scenario: &'a Scenario,
    control: Vec<f64>,
    half_dz: f64,
    eta: f64,
    /// −(Γ/2 + iΔp)
    a31: Complex64,
    /// i(Δc − Δp + iγ)
    a21: Complex64,
}

impl<'a> System<'a> {
    fn new(s: &'a Scenario, nz: usize) -> Self {
        let m = &s.medium;
        let dz = m.length / nz as f64;
        let control = (0..=nz)
            .map(|j| s.profile.rate_at(j as f64 * dz, m.gamma_decay, m.length))
            .collect();
        System {
            scenario: s,
            control,
            half_dz: 0.5 * dz,
            eta: m.eta(),
            a31: -Complex64::new(0.5 * m.damping(), m.delta_p),
            a21: I * Complex64::new(m.delta_c - m.delta_p, m.gamma_ground),
        }
    }

    /// Time derivatives of (ρ31, ρ21) at time `t` under control gain `gain`.
    #[inline]
    fn rates(&self, t: f64, gain: f64, r31: &[Complex64], r21: &[Complex64], d31: &mut [Complex64], d21: &mut [Complex64]) {
        let p_in = self.scenario.probe.boundary(t);
        let i_eta = I * self.eta;
        let mut acc = Complex64::default();
        let mut prev = r31[0];
        for j in 0..r31.len() {
            let c = r31[j];
            if j > 0 {
                acc += (prev + c) * self.half_dz;
                prev = c;
            }
            let probe = p_in + i_eta * acc;
            let half_oc = 0.5 * gain * self.control[j];
            let b = r21[j];
            d31[j] = self.a31 * c + I * (half_oc * b + 0.5 * probe);
            d21[j] = self.a21 * b + I * (half_oc * c);
        }
    }

    /// Ωp(t, L) for the current coherence profile.
    fn probe_out(&self, t: f64, r31: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::default();
        for w in r31.windows(2) {
            acc += (w[0] + w[1]) * self.half_dz;
        }
        self.scenario.probe.boundary(t) + I * self.eta * acc
    }

    fn rk4_step(&self, t: f64, h: f64, r31: &mut [Complex64], r21: &mut [Complex64], ws: &mut Workspace) {
        let n = r31.len();
        let Workspace { k31, k21, t31, t21 } = ws;
        let [k1a, k2a, k3a, k4a] = k31;
        let [k1b, k2b, k3b, k4b] = k21;

        // Steps never straddle a switch, but the last stage sits on one; it
        // must see the gain of the interval being integrated.
        let sched = &self.scenario.schedule;
        let (g0, g1, g2) = (sched.gain_at(t), sched.gain_at(t + 0.5 * h), sched.gain_before(t + h));
        self.rates(t, g0, r31, r21, k1a, k1b);
        for j in 0..n {
            t31[j] = r31[j] + k1a[j] * (0.5 * h);
            t21[j] = r21[j] + k1b[j] * (0.5 * h);
        }
        self.rates(t + 0.5 * h, g1, t31, t21, k2a, k2b);
        for j in 0..n {
            t31[j] = r31[j] + k2a[j] * (0.5 * h);
            t21[j] = r21[j] + k2b[j] * (0.5 * h);
        }
        self.rates(t + 0.5 * h, g1, t31, t21, k3a, k3b);
        for j in 0..n {
            t31[j] = r31[j] + k3a[j] * h;
            t21[j] = r21[j] + k3b[j] * h;
        }
        self.rates(t + h, g2, t31, t21, k4a, k4b);
        let w = h / 6.0;
        for j in 0..n {
            r31[j] += (k1a[j] + (k2a[j] + k3a[j]) * 2.0 + k4a[j]) * w;
            r21[j] += (k1b[j] + (k2b[j] + k3b[j]) * 2.0 + k4b[j]) * w;
        }
    }
}

/// Integrate a scenario with default limits.
pub fn integrate(s: &Scenario) -> Result<FieldRecord> {
    integrate_with(s, 0, &SolverLimits::default())
}

/// Integrate with the grid refined `refine` times (nz, step count and
/// record stride each multiplied by 2^refine), under explicit limits.
///
/// Refined runs record at exactly the same times as the base run.
pub fn integrate_with(s: &Scenario, refine: u32, limits: &SolverLimits) -> Result<FieldRecord> {
    s.check_structure()?;
    let nz = s
        .grid
        .nz
        .checked_mul(1usize << refine)
        .ok_or_else(|| Error::ResourceLimit("nz overflow under refinement".into()))?;
    let plan = StepPlan::new(s, refine);
    if plan.total > limits.max_steps {
        return Err(Error::ResourceLimit(format!(
            "{} time steps requested, limit is {}",
            plan.total, limits.max_steps
        )));
    }
    let base_stride = s
        .grid
        .record_stride
        .map(|v| v as u64)
        .unwrap_or_else(|| StepPlan::new(s, 0).total.div_ceil(MAX_DEFAULT_RECORDS).max(1));
    let stride = base_stride << refine;
    let n_records = plan.total / stride + 1;

    let z_stride = s.outputs.snapshot_z_stride.max(1) << refine;
    let z_points = nz / z_stride + 1;
    let n_snaps = if s.outputs.snapshot_stride > 0 {
        (n_records - 1) / s.outputs.snapshot_stride as u64 + 1
    } else {
        0
    };
    let bytes = n_records * (8 + 2 * 16) + n_snaps * (8 + z_points as u64 * 2 * 16);
    if bytes > limits.max_output_bytes {
        return Err(Error::ResourceLimit(format!(
            "output would need {bytes} bytes, limit is {}",
            limits.max_output_bytes
        )));
    }

    let system = System::new(s, nz);
    let n = nz + 1;
    let mut r31 = vec![Complex64::default(); n];
    let mut r21 = vec![Complex64::default(); n];
    let mut ws = Workspace::new(n);
    let mut record = FieldRecord::with_capacity(n_records as usize, nz, plan.total, plan.max_step);
    let mut snaps = (n_snaps > 0).then(|| {
        let dz = s.medium.length / nz as f64;
        Snapshots::new((0..z_points).map(|k| (k * z_stride) as f64 * dz).collect())
    });

    let threshold_sq = limits.divergence_threshold * limits.divergence_threshold;
    let mut step: u64 = 0;
    let mut push = |step: u64, t: f64, r31: &[Complex64], r21: &[Complex64], record: &mut FieldRecord| {
        if step % stride != 0 {
            return;
        }
        record.push(t, s.probe.boundary(t), system.probe_out(t, r31));
        if let Some(sn) = snaps.as_mut() {
            let k = (step / stride) as usize;
            if k % s.outputs.snapshot_stride == 0 {
                sn.push(
                    t,
                    r31.iter().step_by(z_stride).copied().collect(),
                    r21.iter().step_by(z_stride).copied().collect(),
                );
            }
        }
    };
    push(0, 0.0, &r31, &r21, &mut record);

    for &(a, b, count) in &plan.intervals {
        let h = (b - a) / count as f64;
        for k in 0..count {
            let t = a + k as f64 * h;
            system.rk4_step(t, h, &mut r31, &mut r21, &mut ws);
            step += 1;
            let t_next = if k + 1 == count { b } else { a + (k + 1) as f64 * h };
            let worst = r31
                .iter()
                .chain(r21.iter())
                .map(|c| c.norm_sqr())
                .fold(0.0, f64::max);
            if !(worst <= threshold_sq) {
                let reason = if worst.is_finite() {
                    format!("|rho| = {:.3e} exceeds {}", worst.sqrt(), limits.divergence_threshold)
                } else {
                    "non-finite coherence".to_string()
                };
                return Err(Error::Divergence { step, time: t_next, reason });
            }
            push(step, t_next, &r31, &r21, &mut record);
        }
    }
    record.snapshots = snaps;
    Ok(record)
}

/// Result of a self-convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Relative L2 difference of probe_out between consecutive levels.
    pub errors: Vec<f64>,
    /// False when the sequence fails to decrease (under-resolved base grid).
    pub monotone: bool,
}

/// Run at successively halved dt and doubled nz and compare probe_out.
pub fn convergence_check(s: &Scenario, refinements: u32) -> Result<ConvergenceReport> {
    if refinements < 1 {
        return Err(Error::Domain("refinements must be at least 1".into()));
    }
    let limits = SolverLimits::default();
    let mut prev = integrate_with(s, 0, &limits)?;
    let mut errors = Vec::with_capacity(refinements as usize);
    for level in 1..=refinements {
        let next = integrate_with(s, level, &limits)?;
        errors.push(relative_l2(&next.probe_out, &prev.probe_out));
        prev = next;
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    Ok(ConvergenceReport { errors, monotone })
}

/// ‖a − b‖ / ‖a‖ over paired samples.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "traces must have equal length");
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    (num / den).sqrt()
}
