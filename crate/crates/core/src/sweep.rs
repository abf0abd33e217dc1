//! Parameter sweeps over a base scenario.
//!
//! A sweep is the Cartesian product of its axes (last axis fastest). Points
//! run in parallel on a dedicated pool; results are merged by grid index so
//! the table never depends on the worker count. With a checkpoint path,
//! every finished point is appended as one JSON line, and a later run with
//! the same spec skips points that are already there.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::builtin;
use crate::config::{parse_quantity, parse_scenario, to_toml, Dimension};
use crate::error::{Error, Result};
use crate::metrics::{self, EchoMetrics};
use crate::model::{validate_scenario, Scenario, SpatialProfile};
use crate::solver::integrate;

/// Metrics a sweep can tabulate.
pub const METRIC_NAMES: &[&str] = &[
    "efficiency_R",
    "echo_peak_time",
    "echo_peak_value",
    "echo_fwhm",
    "echo_half_duration",
    "input_fwhm",
    "signal_fwhm",
    "fidelity",
    "fidelity_unnormalized",
    "delay_bandwidth",
    "dispersion_flag",
];

const SYNC_EVERY: usize = 8;
const CHECKPOINT_KIND: &str = "gradient-echo-sweep-checkpoint";

/// One swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub path: String,
    /// Values in base units (τ, Γ, or dimensionless).
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    pub base: Scenario,
    pub axes: Vec<Axis>,
    pub metrics: Vec<String>,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: Option<String>,
    base: Option<String>,
    base_config: Option<String>,
    metrics: Option<Vec<String>>,
    workers: Option<usize>,
    checkpoint: Option<String>,
    axes: Vec<RawAxis>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    path: String,
    values: Vec<toml::Value>,
}

/// Dimension of the value at a parameter path, `None` when dimensionless.
fn path_dimension(path: &str) -> Option<Dimension> {
    match path {
        "medium.gamma_decay" | "medium.gamma_ground" | "medium.delta_p" | "medium.delta_c"
        | "control.profile.b" | "control.profile.zeta" => Some(Dimension::Rate),
        "probe.center_time" | "probe.kappa" | "control.schedule.ramp_time" | "grid.t_end"
        | "grid.dt" | "outputs.echo_after" | "outputs.efficiency_cut" => Some(Dimension::Time),
        p if p.ends_with(".t_start") => Some(Dimension::Time),
        _ => None,
    }
}

fn segment_index(path: &str, field: &str) -> Option<usize> {
    path.strip_prefix("control.schedule.segments[")?
        .strip_suffix(&format!("].{field}"))?
        .parse()
        .ok()
}

/// Set the parameter at `path` to `value` (base units).
pub fn set_param(s: &mut Scenario, path: &str, value: f64) -> Result<()> {
    let kind = s.profile.kind_name();
    let bad_kind = || Error::Sweep(format!("`{path}` does not apply to a `{kind}` profile"));
    match path {
        "medium.gamma_decay" => s.medium.gamma_decay = value,
        "medium.gamma_ground" => s.medium.gamma_ground = value,
        "medium.delta_p" => s.medium.delta_p = value,
        "medium.delta_c" => s.medium.delta_c = value,
        "medium.xi" => s.medium.xi = value,
        "medium.length" => s.medium.length = value,
        "probe.center_time" => s.probe.center_time = value,
        "probe.kappa" => s.probe.kappa = value,
        "probe.amplitude" => s.probe.amplitude = value.into(),
        "control.profile.b" => match &mut s.profile {
            SpatialProfile::Uniform { b } | SpatialProfile::GaussianBeam { b, .. } => *b = value,
            _ => return Err(bad_kind()),
        },
        "control.profile.zeta" => match &mut s.profile {
            SpatialProfile::Linear { zeta } => *zeta = value,
            _ => return Err(bad_kind()),
        },
        "control.profile.z_focus" | "control.profile.rayleigh" => match &mut s.profile {
            SpatialProfile::GaussianBeam { z_focus, rayleigh, .. } => {
                if path.ends_with("z_focus") {
                    *z_focus = value
                } else {
                    *rayleigh = value
                }
            }
            _ => return Err(bad_kind()),
        },
        "control.schedule.ramp_time" => s.schedule.ramp_time = value,
        "grid.t_end" => s.grid.t_end = value,
        "grid.dt" => s.grid.dt = Some(value),
        "grid.nz" => {
            if !(value >= 2.0 && value.fract() == 0.0) {
                return Err(Error::Sweep(format!("grid.nz must be an integer >= 2, got {value}")));
            }
            s.grid.nz = value as usize
        }
        "outputs.echo_after" => s.outputs.echo_after = Some(value),
        "outputs.efficiency_cut" => s.outputs.efficiency_cut = Some(value),
        _ => {
            let n = s.schedule.segments.len();
            let seg = |i: usize| {
                if i < n {
                    Ok(i)
                } else {
                    Err(Error::Sweep(format!("`{path}`: schedule has only {n} segments")))
                }
            };
            if let Some(i) = segment_index(path, "gain") {
                s.schedule.segments[seg(i)?].gain = value;
            } else if let Some(i) = segment_index(path, "t_start") {
                s.schedule.segments[seg(i)?].t_start = value;
            } else {
                return Err(Error::Sweep(format!("unknown parameter path `{path}`")));
            }
        }
    }
    Ok(())
}

fn axis_value(path: &str, v: &toml::Value) -> Result<f64> {
    let dim = path_dimension(path);
    match (v, dim) {
        (toml::Value::Float(x), None) => Ok(*x),
        (toml::Value::Integer(x), None) => Ok(*x as f64),
        (toml::Value::String(text), Some(d)) => {
            parse_quantity(text, d).map_err(|m| Error::Config(format!("axis `{path}`: {m}")))
        }
        (toml::Value::String(_), None) => {
            Err(Error::Config(format!("axis `{path}` is dimensionless; give plain numbers")))
        }
        (_, Some(_)) => Err(Error::Config(format!("axis `{path}` needs unit strings such as \"2 gamma\""))),
        _ => Err(Error::Config(format!("axis `{path}`: values must be numbers"))),
    }
}

impl SweepSpec {
    /// Parse a sweep spec. Relative `base_config` and `checkpoint` paths are
    /// resolved against `dir`.
    pub fn parse(text: &str, dir: Option<&Path>) -> Result<SweepSpec> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().into()))?;
        let resolve = |p: &str| match dir {
            Some(d) => d.join(p),
            None => PathBuf::from(p),
        };
        let base = match (&raw.base, &raw.base_config) {
            (Some(name), None) => builtin::scenario(name)
                .ok_or_else(|| Error::Config(format!("unknown built-in scenario `{name}`")))?,
            (None, Some(path)) => {
                let path = resolve(path);
                let text = fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                parse_scenario(&text)?.scenario
            }
            _ => return Err(Error::Config("sweep needs exactly one of `base` or `base_config`".into())),
        };
        let mut axes = Vec::with_capacity(raw.axes.len());
        for a in &raw.axes {
            let values = a.values.iter().map(|v| axis_value(&a.path, v)).collect::<Result<Vec<_>>>()?;
            axes.push(Axis { path: a.path.clone(), values });
        }
        let spec = SweepSpec {
            name: raw.name.unwrap_or_else(|| base.name.clone()),
            base,
            axes,
            metrics: raw.metrics.unwrap_or_else(|| METRIC_NAMES.iter().map(|s| s.to_string()).collect()),
            workers: raw.workers.unwrap_or(1),
            checkpoint: raw.checkpoint.as_deref().map(resolve),
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::Config("sweep needs at least one axis".into()));
        }
        for a in &self.axes {
            if a.values.is_empty() {
                return Err(Error::Config(format!("axis `{}` has no values", a.path)));
            }
            if a.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("axis `{}` has a non-finite value", a.path)));
            }
            let mut probe = self.base.clone();
            set_param(&mut probe, &a.path, a.values[0]).map_err(|e| Error::Config(e.to_string()))?;
        }
        for m in &self.metrics {
            if !METRIC_NAMES.contains(&m.as_str()) {
                return Err(Error::Config(format!("unknown metric `{m}` (known: {})", METRIC_NAMES.join(", "))));
            }
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis values of grid point `index`, last axis fastest.
    pub fn coords(&self, index: usize) -> Vec<f64> {
        let mut rem = index;
        let mut out = vec![0.0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            out[k] = a.values[rem % a.values.len()];
            rem /= a.values.len();
        }
        out
    }

    pub fn point_scenario(&self, index: usize) -> Result<Scenario> {
        let mut s = self.base.clone();
        for (a, v) in self.axes.iter().zip(self.coords(index)) {
            set_param(&mut s, &a.path, v)?;
        }
        s.name = format!("{}#{index}", self.name);
        Ok(s)
    }

    /// Hash of everything that determines the results; worker count and
    /// checkpoint location are excluded so a resume may change them.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(to_toml(&self.base, None).as_bytes());
        for a in &self.axes {
            h.update(a.path.as_bytes());
            for v in &a.values {
                h.update(v.to_bits().to_le_bytes());
            }
            h.update(b"\n");
        }
        h.update(self.metrics.join(",").as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Result of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub index: usize,
    pub metrics: Option<EchoMetrics>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axes: Vec<String>,
    pub metrics: Vec<String>,
    pub coords: Vec<Vec<f64>>,
    pub points: Vec<PointResult>,
}

/// How a sweep run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepOutcome {
    Complete(SweepTable),
    /// Stopped early; `done` points are in the checkpoint.
    Interrupted { done: usize, total: usize },
}

/// Run-time knobs that are not part of the spec.
#[derive(Debug, Clone, Default)]
pub struct SweepControl {
    /// Start no new points after this many were computed in this run.
    pub stop_after: Option<usize>,
    /// Ignore (and overwrite) an existing checkpoint instead of resuming.
    pub fresh: bool,
}

/// Evaluate one point; failures become an error string, never a panic.
pub fn run_point(spec: &SweepSpec, index: usize) -> PointResult {
    let res = (|| -> Result<EchoMetrics> {
        let s = spec.point_scenario(index)?;
        let report = validate_scenario(&s)?;
        if report.has_errors() {
            let msgs: Vec<String> = report.errors().map(|d| format!("{}: {}", d.code, d.message)).collect();
            return Err(Error::InvalidScenario(msgs.join("; ")));
        }
        let record = integrate(&s)?;
        metrics::evaluate(&record, &s)
    })();
    match res {
        Ok(m) => PointResult { index, metrics: Some(m), error: None },
        Err(e) => PointResult { index, metrics: None, error: Some(e.to_string()) },
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    kind: String,
    spec_hash: String,
    points: usize,
}

/// Read the finished points of a checkpoint. A truncated or garbled line
/// (an interrupted write) and everything after it is dropped.
fn read_checkpoint(path: &Path, spec: &SweepSpec) -> Result<Vec<PointResult>> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut lines = BufReader::new(file).lines();
    let header: Header = match lines.next() {
        Some(Ok(l)) => serde_json::from_str(&l)
            .map_err(|e| Error::Sweep(format!("{}: bad checkpoint header: {e}", path.display())))?,
        _ => return Ok(Vec::new()),
    };
    if header.kind != CHECKPOINT_KIND {
        return Err(Error::Sweep(format!("{} is not a sweep checkpoint", path.display())));
    }
    let hash = spec.hash();
    if header.spec_hash != hash || header.points != spec.len() {
        return Err(Error::Sweep(format!(
            "{} belongs to a different sweep spec (hash {}, expected {hash})",
            path.display(),
            header.spec_hash
        )));
    }
    let mut out = Vec::new();
    for line in lines {
        let Ok(line) = line else { break };
        match serde_json::from_str::<PointResult>(&line) {
            Ok(p) if p.index < spec.len() => out.push(p),
            _ => break,
        }
    }
    Ok(out)
}

struct Writer {
    file: File,
    pending: usize,
}

impl Writer {
    fn append(&mut self, p: &PointResult) -> Result<()> {
        let line = serde_json::to_string(p).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(self.file, "{line}")?;
        self.pending += 1;
        if self.pending >= SYNC_EVERY {
            self.file.sync_data()?;
            self.pending = 0;
        }
        Ok(())
    }
}

/// Rewrite the checkpoint with only its valid lines, then open it for append.
fn open_checkpoint(path: &Path, spec: &SweepSpec, kept: &[PointResult]) -> Result<Writer> {
    let tmp = path.with_extension("ckpt.tmp");
    {
        let mut f = File::create(&tmp)?;
        let header = Header { kind: CHECKPOINT_KIND.into(), spec_hash: spec.hash(), points: spec.len() };
        writeln!(f, "{}", serde_json::to_string(&header).map_err(|e| Error::Io(e.to_string()))?)?;
        for p in kept {
            writeln!(f, "{}", serde_json::to_string(p).map_err(|e| Error::Io(e.to_string()))?)?;
        }
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    let file = OpenOptions::new().append(true).open(path)?;
    Ok(Writer { file, pending: 0 })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    match run_sweep_with(spec, &SweepControl::default())? {
        SweepOutcome::Complete(t) => Ok(t),
        SweepOutcome::Interrupted { .. } => unreachable!("no stop requested"),
    }
}

pub fn run_sweep_with(spec: &SweepSpec, ctl: &SweepControl) -> Result<SweepOutcome> {
    spec.check()?;
    let total = spec.len();
    let mut results: Vec<Option<PointResult>> = vec![None; total];

    let writer = match &spec.checkpoint {
        Some(path) => {
            let kept = if path.exists() && !ctl.fresh { read_checkpoint(path, spec)? } else { Vec::new() };
            let mut unique = Vec::with_capacity(kept.len());
            for p in kept {
                if results[p.index].is_none() {
                    results[p.index] = Some(p.clone());
                    unique.push(p);
                }
            }
            Some(Mutex::new(open_checkpoint(path, spec, &unique)?))
        }
        None => None,
    };

    let todo: Vec<usize> = (0..total).filter(|&i| results[i].is_none()).collect();
    let started = AtomicUsize::new(0);
    let limit = ctl.stop_after.unwrap_or(usize::MAX);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::ResourceLimit(format!("cannot start worker pool: {e}")))?;

    let fresh: Vec<Result<PointResult>> = pool.install(|| {
        todo.par_iter()
            .filter_map(|&i| {
                if started.fetch_add(1, Ordering::SeqCst) >= limit {
                    return None;
                }
                let p = run_point(spec, i);
                if let Some(w) = &writer {
                    let mut w = w.lock().unwrap_or_else(|e| e.into_inner());
                    if let Err(e) = w.append(&p) {
                        return Some(Err(e));
                    }
                }
                Some(Ok(p))
            })
            .collect()
    });
    if let Some(w) = writer {
        let w = w.into_inner().unwrap_or_else(|e| e.into_inner());
        w.file.sync_all()?;
    }
    for p in fresh {
        let p = p?;
        let i = p.index;
        results[i] = Some(p);
    }

    let done = results.iter().filter(|r| r.is_some()).count();
    if done < total {
        return Ok(SweepOutcome::Interrupted { done, total });
    }
    Ok(SweepOutcome::Complete(SweepTable {
        axes: spec.axes.iter().map(|a| a.path.clone()).collect(),
        metrics: spec.metrics.clone(),
        coords: (0..total).map(|i| spec.coords(i)).collect(),
        points: results.into_iter().map(|r| r.expect("all points done")).collect(),
    }))
}

fn metric_cell(m: &EchoMetrics, name: &str) -> String {
    let num = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    match name {
        "efficiency_R" => num(m.efficiency_r),
        "echo_peak_time" => num(m.echo_peak_time),
        "echo_peak_value" => num(m.echo_peak_value),
        "echo_fwhm" => num(m.echo_fwhm),
        "echo_half_duration" => num(m.echo_half_duration),
        "input_fwhm" => num(m.input_fwhm),
        "signal_fwhm" => num(m.signal_fwhm),
        "fidelity" => num(m.fidelity),
        "fidelity_unnormalized" => num(m.fidelity_unnormalized),
        "delay_bandwidth" => num(m.delay_bandwidth),
        "dispersion_flag" => m.dispersion_flag.map(|b| b.to_string()).unwrap_or_default(),
        _ => String::new(),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl SweepTable {
    /// One row per point: index, axis values, metrics, error.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index");
        for a in &self.axes {
            out.push(',');
            out.push_str(a);
        }
        for m in &self.metrics {
            out.push(',');
            out.push_str(m);
        }
        out.push_str(",error\n");
        for (p, c) in self.points.iter().zip(&self.coords) {
            out.push_str(&p.index.to_string());
            for v in c {
                out.push_str(&format!(",{v:e}"));
            }
            for m in &self.metrics {
                out.push(',');
                if let Some(pm) = &p.metrics {
                    out.push_str(&metric_cell(pm, m));
                }
            }
            out.push(',');
            out.push_str(&csv_escape(p.error.as_deref().unwrap_or("")));
            out.push('\n');
        }
        out
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }
}
