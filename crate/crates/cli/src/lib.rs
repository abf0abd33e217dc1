//! Subcommand implementations behind the `gecho` binary.
//!
//! Every command computes everything first and only then writes, through a
//! staging directory, so a failed run leaves no partial files behind.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use gradient_echo::analytic::{
    self, probe_closed, rho21_closed, rho31_closed, spectral_response, two_level_tail, AnalyticParams,
};
use gradient_echo::builtin;
use gradient_echo::config::{parse_quantity, parse_scenario, scenario_hash, to_toml, Dimension};
use gradient_echo::metrics::{self, BeamGeometry, EchoMetrics, FeasibilityInput, FeasibilityReport};
use gradient_echo::model::{validate_scenario, Severity};
use gradient_echo::solver::{integrate, relative_l2, FieldRecord};
use gradient_echo::sweep::{run_sweep_with, SweepControl, SweepOutcome, SweepSpec, SweepTable};
use gradient_echo::{Error, Scenario, SpatialProfile};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("scenario `{name}` failed validation:\n{details}")]
    Validation { name: String, details: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for bad input, 3 for numerical divergence, 4 for resource limits,
    /// 1 for anything else (I/O).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::Config(_) | Error::InvalidScenario(_) | Error::Domain(_) | Error::Sweep(_) => 2,
                Error::Divergence { .. } => 3,
                Error::ResourceLimit(_) => 4,
                _ => 1,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A scenario together with where it came from.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub source: String,
    pub description: Option<String>,
}

/// Resolve a built-in name or a path to a TOML file.
pub fn load_scenario(source: &str) -> CliResult<LoadedScenario> {
    if let Some(s) = builtin::scenario(source) {
        return Ok(LoadedScenario {
            scenario: s,
            source: format!("builtin:{source}"),
            description: builtin::note(source).map(str::to_string),
        });
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "`{source}` is neither a built-in scenario ({}) nor an existing file",
            builtin::SCENARIO_NAMES.join(", ")
        )));
    }
    let text = fs::read_to_string(path)?;
    let cfg = parse_scenario(&text).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok(LoadedScenario { scenario: cfg.scenario, source: path.display().to_string(), description: cfg.description })
}

/// Grid changes requested with `--grid-override nz=…,dt=…`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridOverride {
    pub nz: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub record_stride: Option<usize>,
}

impl GridOverride {
    /// Parse `key=value` pairs; times accept unit strings (`dt=0.1 ntau`)
    /// or bare numbers in τ.
    pub fn parse(text: &str) -> CliResult<GridOverride> {
        let mut g = GridOverride::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("grid override `{part}` is not key=value")))?;
            let v = v.trim();
            let time = |v: &str| -> CliResult<f64> {
                let x = if v.contains(char::is_whitespace) {
                    parse_quantity(v, Dimension::Time).map_err(CliError::Usage)?
                } else {
                    v.parse::<f64>().map_err(|_| CliError::Usage(format!("`{v}` is not a number")))?
                };
                if !(x > 0.0) || !x.is_finite() {
                    return Err(CliError::Usage(format!("grid override `{part}` must be positive")));
                }
                Ok(x)
            };
            let count = |v: &str| -> CliResult<usize> {
                v.parse().map_err(|_| CliError::Usage(format!("`{v}` is not a positive integer")))
            };
            match k.trim() {
                "nz" => g.nz = Some(count(v)?),
                "dt" => g.dt = Some(time(v)?),
                "t_end" => g.t_end = Some(time(v)?),
                "record_stride" => g.record_stride = Some(count(v)?),
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown grid override `{other}` (nz, dt, t_end, record_stride)"
                    )))
                }
            }
        }
        Ok(g)
    }

    pub fn apply(&self, s: &mut Scenario) {
        if let Some(nz) = self.nz {
            s.grid.nz = nz;
        }
        if let Some(dt) = self.dt {
            s.grid.dt = Some(dt);
        }
        if let Some(t) = self.t_end {
            s.grid.t_end = t;
        }
        if let Some(r) = self.record_stride {
            s.grid.record_stride = Some(r);
        }
    }
}

/// Validate, printing warnings; under-resolution is an error.
fn checked(s: &Scenario) -> CliResult<Vec<String>> {
    let report = validate_scenario(s)?;
    let mut warnings = Vec::new();
    let mut errors = Vec::new();
    for d in &report.diagnostics {
        let line = format!("[{}] {}", d.code, d.message);
        match d.severity {
            Severity::Warning => warnings.push(line),
            Severity::Error => errors.push(line),
        }
    }
    if !errors.is_empty() {
        return Err(CliError::Validation { name: s.name.clone(), details: errors.join("\n") });
    }
    Ok(warnings)
}

/// Files staged in a hidden directory and moved into place together.
struct Staging {
    dir: PathBuf,
    out: PathBuf,
    files: Vec<String>,
}

impl Staging {
    fn new(out: &Path) -> CliResult<Staging> {
        fs::create_dir_all(out)?;
        let dir = out.join(format!(".staging-{}", std::process::id()));
        if dir.exists() {
            fs::remove_dir_all(&dir)?;
        }
        fs::create_dir(&dir)?;
        Ok(Staging { dir, out: out.to_path_buf(), files: Vec::new() })
    }

    fn add(&mut self, name: &str, contents: &[u8]) -> CliResult<()> {
        fs::write(self.dir.join(name), contents)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn commit(self) -> CliResult<Vec<PathBuf>> {
        let mut out = Vec::with_capacity(self.files.len());
        for f in &self.files {
            let dest = self.out.join(f);
            fs::rename(self.dir.join(f), &dest)?;
            out.push(dest);
        }
        fs::remove_dir_all(&self.dir)?;
        Ok(out)
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.dir);
    }
}

fn to_json<T: Serialize>(v: &T) -> CliResult<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Time series: t, Re in, Im in, Re out, Im out, |out|².
pub fn record_csv(r: &FieldRecord) -> String {
    let mut out = String::with_capacity(r.len() * 120);
    out.push_str("t,re_in,im_in,re_out,im_out,abs_out_sq\n");
    for k in 0..r.len() {
        let (i, o) = (r.probe_in[k], r.probe_out[k]);
        let _ = writeln!(out, "{:e},{:e},{:e},{:e},{:e},{:e}", r.times[k], i.re, i.im, o.re, o.im, o.norm_sqr());
    }
    out
}

/// Coherence snapshots in long format: t, z, Re/Im ρ31, Re/Im ρ21.
pub fn snapshots_csv(r: &FieldRecord) -> Option<String> {
    let s = r.snapshots.as_ref()?;
    let mut out = String::from("t,z,re_rho31,im_rho31,re_rho21,im_rho21\n");
    for (k, t) in s.times.iter().enumerate() {
        for (j, z) in s.z.iter().enumerate() {
            let (a, b) = (s.rho31[k][j], s.rho21[k][j]);
            let _ = writeln!(out, "{t:e},{z:e},{:e},{:e},{:e},{:e}", a.re, a.im, b.re, b.im);
        }
    }
    Some(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct GridUsed {
    pub nz: usize,
    pub max_dt: f64,
    pub steps: u64,
    pub records: usize,
}

/// Provenance of one run; lists every file it produced.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub source: String,
    pub description: Option<String>,
    pub config_hash: String,
    /// Resolved scenario in the configuration grammar.
    pub scenario: String,
    pub grid: GridUsed,
    pub wall_time_s: f64,
    pub warnings: Vec<String>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: FieldRecord,
    pub metrics: EchoMetrics,
    pub manifest: RunManifest,
    pub files: Vec<PathBuf>,
}

fn file_stem(s: &Scenario) -> String {
    s.name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// Simulate a scenario and write `<name>.csv`, `<name>.metrics.json`,
/// optional `<name>.snapshots.csv` and `<name>.manifest.json`.
pub fn cmd_run(source: &str, out_dir: &Path, grid: &GridOverride) -> CliResult<RunOutput> {
    let mut loaded = load_scenario(source)?;
    grid.apply(&mut loaded.scenario);
    let s = &loaded.scenario;
    let warnings = checked(s)?;
    let start = Instant::now();
    let record = integrate(s)?;
    let metrics = metrics::evaluate(&record, s)?;
    let wall = start.elapsed().as_secs_f64();

    let stem = file_stem(s);
    let mut stage = Staging::new(out_dir)?;
    stage.add(&format!("{stem}.csv"), record_csv(&record).as_bytes())?;
    stage.add(&format!("{stem}.metrics.json"), &to_json(&metrics)?)?;
    if let Some(snap) = snapshots_csv(&record) {
        stage.add(&format!("{stem}.snapshots.csv"), snap.as_bytes())?;
    }
    let manifest_name = format!("{stem}.manifest.json");
    let manifest = RunManifest {
        tool_version: VERSION.into(),
        command: "run".into(),
        source: loaded.source.clone(),
        description: loaded.description.clone(),
        config_hash: scenario_hash(s),
        scenario: to_toml(s, loaded.description.as_deref()),
        grid: GridUsed { nz: record.nz, max_dt: record.max_step, steps: record.steps, records: record.len() },
        wall_time_s: wall,
        warnings,
        files: stage.files.clone(),
    };
    stage.add(&manifest_name, &to_json(&manifest)?)?;
    let files = stage.commit()?;
    Ok(RunOutput { record, metrics, manifest, files })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepManifest {
    pub tool_version: String,
    pub name: String,
    pub spec_hash: String,
    pub base_config_hash: String,
    pub axes: Vec<(String, Vec<f64>)>,
    pub grid_shape: Vec<usize>,
    pub points: usize,
    pub failures: usize,
    pub workers: usize,
    pub resumed_points: usize,
    pub wall_time_s: f64,
    pub files: Vec<String>,
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)] // returned once per command
pub enum SweepRun {
    Complete { table: SweepTable, manifest: SweepManifest, files: Vec<PathBuf> },
    Interrupted { done: usize, total: usize, checkpoint: PathBuf },
}

pub fn load_sweep(source: &str) -> CliResult<SweepSpec> {
    if let Some(text) = builtin::sweep_spec(source) {
        return Ok(SweepSpec::parse(text, None)?);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "`{source}` is neither a built-in sweep ({}) nor an existing file",
            builtin::SWEEP_NAMES.join(", ")
        )));
    }
    let text = fs::read_to_string(path)?;
    Ok(SweepSpec::parse(&text, path.parent())?)
}

/// Options of `gecho sweep` beyond the spec itself.
#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    pub workers: Option<usize>,
    /// Continue from the checkpoint in the output directory.
    pub resume: bool,
    /// Stop after this many newly computed points (interruption testing).
    pub stop_after: Option<usize>,
}

/// Run a sweep, checkpointing into `<out>/<name>.ckpt`, and write
/// `<name>.csv` plus `<name>.manifest.json`.
pub fn cmd_sweep(source: &str, out_dir: &Path, opts: &SweepOptions) -> CliResult<SweepRun> {
    let mut spec = load_sweep(source)?;
    if let Some(w) = opts.workers {
        spec.workers = w;
    }
    fs::create_dir_all(out_dir)?;
    let stem: String = spec.name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
    let ckpt = spec.checkpoint.clone().unwrap_or_else(|| out_dir.join(format!("{stem}.ckpt")));
    spec.checkpoint = Some(ckpt.clone());
    let resumed = if opts.resume && ckpt.exists() {
        fs::read_to_string(&ckpt)?.lines().count().saturating_sub(1)
    } else {
        0
    };
    let start = Instant::now();
    let ctl = SweepControl { stop_after: opts.stop_after, fresh: !opts.resume };
    let table = match run_sweep_with(&spec, &ctl)? {
        SweepOutcome::Complete(t) => t,
        SweepOutcome::Interrupted { done, total } => {
            return Ok(SweepRun::Interrupted { done, total, checkpoint: ckpt })
        }
    };
    let wall = start.elapsed().as_secs_f64();

    let mut stage = Staging::new(out_dir)?;
    stage.add(&format!("{stem}.csv"), table.to_csv().as_bytes())?;
    let manifest = SweepManifest {
        tool_version: VERSION.into(),
        name: spec.name.clone(),
        spec_hash: spec.hash(),
        base_config_hash: scenario_hash(&spec.base),
        axes: spec.axes.iter().map(|a| (a.path.clone(), a.values.clone())).collect(),
        grid_shape: spec.axes.iter().map(|a| a.values.len()).collect(),
        points: table.points.len(),
        failures: table.failures(),
        workers: spec.workers,
        resumed_points: resumed.min(table.points.len()),
        wall_time_s: wall,
        files: stage.files.clone(),
    };
    stage.add(&format!("{stem}.manifest.json"), &to_json(&manifest)?)?;
    let files = stage.commit()?;
    // The finished table supersedes the checkpoint.
    let _ = fs::remove_file(&ckpt);
    Ok(SweepRun::Complete { table, manifest, files })
}

/// Relative L2 residuals of the solver against the closed forms and
/// against the exact constant-control response.
#[derive(Debug, Clone, Serialize)]
pub struct Residuals {
    pub rho31: f64,
    pub rho21: Option<f64>,
    pub probe_tail: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub tool_version: String,
    pub source: String,
    pub config_hash: String,
    pub omega_c: f64,
    pub eta_z: f64,
    pub window: (f64, f64),
    pub samples: usize,
    /// Bandwidth ≫ Γ ≫ Ωc ordering of the closed forms.
    pub validity_bandwidth_exceeds_decay: bool,
    pub validity_decay_exceeds_control: bool,
    pub within_validity: bool,
    /// Solver vs the approximate Bessel-beat closed forms.
    pub vs_closed_form: Residuals,
    /// Solver vs the exact linear response (transform method).
    pub vs_exact: Residuals,
    /// Solver vs the exact two-level tail, when Ωc = 0.
    pub vs_two_level: Option<f64>,
    pub wall_time_s: f64,
    pub files: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CompareOutput {
    pub report: CompareReport,
    pub files: Vec<PathBuf>,
}

const COMPARE_T_MIN: f64 = 0.5;
const COMPARE_T_MAX: f64 = 10.0;

fn rel_l2_pairs(pairs: &[(Complex64, Complex64)]) -> f64 {
    let (a, b): (Vec<_>, Vec<_>) = pairs.iter().copied().unzip();
    relative_l2(&a, &b)
}

/// Solver against the closed forms for a constant, uniform control.
///
/// Residuals are taken over T = t − t0 ∈ [0.5, 10]τ (clipped to the run).
pub fn cmd_compare(source: &str, out_dir: &Path, grid: &GridOverride) -> CliResult<CompareOutput> {
    let mut loaded = load_scenario(source)?;
    grid.apply(&mut loaded.scenario);
    let s = &mut loaded.scenario;
    let omega_c = match (&s.profile, s.schedule.segments.as_slice()) {
        (SpatialProfile::Uniform { b }, [seg]) => b * s.medium.gamma_decay * seg.gain,
        _ => {
            return Err(CliError::Usage(
                "compare needs a uniform profile with a single constant schedule segment".into(),
            ))
        }
    };
    if s.outputs.snapshot_stride == 0 {
        s.outputs.snapshot_stride = 1;
    }
    // Keep z = L among the snapshot nodes.
    if s.grid.nz % s.outputs.snapshot_z_stride != 0 {
        s.outputs.snapshot_z_stride = s.grid.nz;
    }
    let s = &loaded.scenario;
    checked(s)?;
    let start = Instant::now();
    let record = integrate(s)?;
    let snaps = record.snapshots.as_ref().expect("snapshots requested");
    let j_end = snaps.nearest_z(s.medium.length);
    let (r31, r21) = snaps.series_at(j_end);

    let dt = record.times[1] - record.times[0];
    if record.times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt) {
        return Err(CliError::Usage("compare needs uniformly spaced records".into()));
    }
    let length = s.medium.length;
    let exact = spectral_response(&s.medium, omega_c, length, dt, &record.probe_in)?;
    let eta_z = s.medium.eta() * length;
    let p = AnalyticParams {
        omega_c,
        eta_z,
        gamma_decay: s.medium.gamma_decay,
        probe_amp: s.probe.amplitude,
    };
    let t0 = s.probe.center_time;
    let t_hi = (t0 + COMPARE_T_MAX).min(*record.times.last().unwrap());
    let validity = p.validity(1.0 / s.probe.kappa);

    let stride = s.outputs.snapshot_stride;
    let mut csv = String::from(
        "T,re_rho31,im_rho31,re_rho31_closed,im_rho31_closed,re_rho31_exact,im_rho31_exact,\
re_rho21,im_rho21,re_rho21_closed,im_rho21_closed,re_rho21_exact,im_rho21_exact,\
re_tail,im_tail,tail_closed,re_tail_exact,im_tail_exact,tail_two_level\n",
    );
    let (mut c31, mut c21, mut ctail, mut e31, mut e21, mut etail, mut tl) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (k, &t_snap) in snaps.times.iter().enumerate() {
        let i = k * stride;
        let big_t = t_snap - t0;
        if big_t <= 0.0 {
            continue;
        }
        let a31 = rho31_closed(&p, big_t)?;
        let a21 = rho21_closed(&p, big_t)?;
        let tail_closed = probe_closed(&p, big_t)?.tail * p.probe_amp;
        let tail = record.probe_out[i] - record.probe_in[i];
        let tail_exact = exact.probe[i] - record.probe_in[i];
        let two = two_level_tail(eta_z, s.medium.gamma_decay, big_t)?;
        let _ = writeln!(
            csv,
            "{big_t:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{two:e}",
            r31[k].re, r31[k].im, a31.re, a31.im, exact.rho31[i].re, exact.rho31[i].im,
            r21[k].re, r21[k].im, a21.re, a21.im, exact.rho21[i].re, exact.rho21[i].im,
            tail.re, tail.im, tail_closed.re, tail_exact.re, tail_exact.im,
        );
        if big_t >= COMPARE_T_MIN && t_snap <= t_hi {
            c31.push((a31, r31[k]));
            c21.push((a21, r21[k]));
            ctail.push((tail_closed, tail));
            e31.push((exact.rho31[i], r31[k]));
            e21.push((exact.rho21[i], r21[k]));
            etail.push((tail_exact, tail));
            tl.push((Complex64::new(two, 0.0) * p.probe_amp, tail));
        }
    }
    if c31.len() < 2 {
        return Err(CliError::Usage(format!(
            "run ends before T = {COMPARE_T_MIN}τ after the probe; nothing to compare"
        )));
    }
    let has_control = omega_c != 0.0;
    let report_rho21 = |v: &[(Complex64, Complex64)]| has_control.then(|| rel_l2_pairs(v));
    let stem = file_stem(s);
    let mut stage = Staging::new(out_dir)?;
    stage.add(&format!("{stem}.compare.csv"), csv.as_bytes())?;
    let mut report = CompareReport {
        tool_version: VERSION.into(),
        source: loaded.source.clone(),
        config_hash: scenario_hash(s),
        omega_c,
        eta_z,
        window: (COMPARE_T_MIN, t_hi - t0),
        samples: c31.len(),
        validity_bandwidth_exceeds_decay: validity.bandwidth_exceeds_decay,
        validity_decay_exceeds_control: validity.decay_exceeds_control,
        within_validity: validity.holds(),
        vs_closed_form: Residuals {
            rho31: rel_l2_pairs(&c31),
            rho21: report_rho21(&c21),
            probe_tail: rel_l2_pairs(&ctail),
        },
        vs_exact: Residuals {
            rho31: rel_l2_pairs(&e31),
            rho21: report_rho21(&e21),
            probe_tail: rel_l2_pairs(&etail),
        },
        vs_two_level: (!has_control).then(|| rel_l2_pairs(&tl)),
        wall_time_s: start.elapsed().as_secs_f64(),
        files: Vec::new(),
    };
    let report_name = format!("{stem}.compare.json");
    report.files = stage.files.iter().cloned().chain([report_name.clone()]).collect();
    stage.add(&report_name, &to_json(&report)?)?;
    let files = stage.commit()?;
    Ok(CompareOutput { report, files })
}

/// Closed-form curves on a uniform T grid:
/// T, Re/Im ρ31, Re/Im ρ21, probe tail, exact two-level tail.
pub fn cmd_analytic(p: &AnalyticParams, t_max: f64, points: usize) -> CliResult<String> {
    if !(t_max > 0.0) || points < 2 {
        return Err(CliError::Usage("analytic needs t_max > 0 and at least two points".into()));
    }
    let v = p.validity(f64::INFINITY);
    let mut out = format!(
        "# omega_c={:e} eta_z={:e} gamma={:e} decay_exceeds_control={}\n",
        p.omega_c, p.eta_z, p.gamma_decay, v.decay_exceeds_control
    );
    out.push_str("T,re_rho31,im_rho31,re_rho21,im_rho21,probe_tail,two_level_tail\n");
    for k in 1..=points {
        let t = t_max * k as f64 / points as f64;
        let a = rho31_closed(p, t)?;
        let b = rho21_closed(p, t)?;
        let tail = probe_closed(p, t)?.tail;
        let two = analytic::two_level_tail(p.eta_z, p.gamma_decay, t)?;
        let _ = writeln!(out, "{t:e},{:e},{:e},{:e},{:e},{tail:e},{two:e}", a.re, a.im, b.re, b.im);
    }
    Ok(out)
}

pub fn cmd_feasibility(
    b: f64,
    length_cm: f64,
    wavelength_nm: f64,
    lifetime_s: f64,
) -> CliResult<(FeasibilityReport, FeasibilityReport)> {
    let input = |geometry| FeasibilityInput { b, length_cm, wavelength_nm, lifetime_s, geometry };
    Ok((
        metrics::feasibility(input(BeamGeometry::GaussianBeam))?,
        metrics::feasibility(input(BeamGeometry::Perpendicular))?,
    ))
}

/// Human-readable feasibility summary.
pub fn feasibility_text(g: &FeasibilityReport, p: &FeasibilityReport) -> String {
    let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.4e}"));
    format!(
        "focal intensity      {:.4e} W/cm^2\n\
         gaussian beam        rayleigh length {} um, spot {} um^2, power {} W\n\
         perpendicular beam   waist {} um, spot {} um^2\n",
        g.focal_intensity_w_per_cm2,
        opt(g.rayleigh_um),
        opt(g.spot_area_um2),
        opt(g.power_w),
        opt(p.waist_um),
        opt(p.perpendicular_spot_um2),
    )
}
