use num_complex::Complex64;

use crate::model::TraceKind;

/// Coherence profiles sampled on a decimated space-time grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Snapshots {
    pub times: Vec<f64>,
    pub z: Vec<f64>,
    /// `rho31[k][j]` is ρ31 at `times[k]`, `z[j]`.
    pub rho31: Vec<Vec<Complex64>>,
    pub rho21: Vec<Vec<Complex64>>,
}

impl Snapshots {
    pub(crate) fn new(z: Vec<f64>) -> Self {
        Snapshots { z, ..Default::default() }
    }

    pub(crate) fn push(&mut self, t: f64, rho31: Vec<Complex64>, rho21: Vec<Complex64>) {
        self.times.push(t);
        self.rho31.push(rho31);
        self.rho21.push(rho21);
    }

    /// Index of the stored position closest to `z`.
    pub fn nearest_z(&self, z: f64) -> usize {
        self.z
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).abs().total_cmp(&(b.1 - z).abs()))
            .map(|(j, _)| j)
            .unwrap_or(0)
    }

    /// Time series of (ρ31, ρ21) at stored position index `j`.
    pub fn series_at(&self, j: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        (
            self.rho31.iter().map(|row| row[j]).collect(),
            self.rho21.iter().map(|row| row[j]).collect(),
        )
    }
}

/// Output of one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRecord {
    pub times: Vec<f64>,
    /// Ωp(t, 0)
    pub probe_in: Vec<Complex64>,
    /// Ωp(t, L)
    pub probe_out: Vec<Complex64>,
    pub snapshots: Option<Snapshots>,
    pub nz: usize,
    pub steps: u64,
    /// Longest time step actually taken.
    pub max_step: f64,
}

impl FieldRecord {
    pub(crate) fn with_capacity(n: usize, nz: usize, steps: u64, max_step: f64) -> Self {
        FieldRecord {
            times: Vec::with_capacity(n),
            probe_in: Vec::with_capacity(n),
            probe_out: Vec::with_capacity(n),
            snapshots: None,
            nz,
            steps,
            max_step,
        }
    }

    pub(crate) fn push(&mut self, t: f64, p_in: Complex64, p_out: Complex64) {
        self.times.push(t);
        self.probe_in.push(p_in);
        self.probe_out.push(p_out);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Field radiated by the medium, Ωp(t, L) − Ωp(t, 0).
    pub fn scattered(&self) -> Vec<Complex64> {
        self.probe_out.iter().zip(&self.probe_in).map(|(o, i)| o - i).collect()
    }

    pub fn input_intensity(&self) -> Vec<f64> {
        self.probe_in.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn output_intensity(&self) -> Vec<f64> {
        self.probe_out.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn field(&self, kind: TraceKind) -> Vec<Complex64> {
        match kind {
            TraceKind::Transmitted => self.probe_out.clone(),
            TraceKind::Scattered => self.scattered(),
        }
    }

    pub fn intensity(&self, kind: TraceKind) -> Vec<f64> {
        match kind {
            TraceKind::Transmitted => self.output_intensity(),
            TraceKind::Scattered => self.scattered().iter().map(|c| c.norm_sqr()).collect(),
        }
    }
}
