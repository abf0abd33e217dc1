//! Scenario configuration files.
//!
//! TOML with the sections `[medium]`, `[probe]`, `[control.profile]`,
//! `[control.schedule]`, `[grid]` and `[outputs]`. Every time and rate
//! carries an explicit unit inside a string, e.g. `kappa = "5e-9 tau"`,
//! `t_end = "5 utau"`, `b = "2e7 gamma"`. Bare numbers are rejected for
//! those fields so that μτ and τ cannot be confused. Dimensionless values
//! (`xi`, `gain`, positions in units of L) are plain numbers.
//!
//! [`to_toml`] writes every quantity in base units (`tau`, `gamma`) with
//! shortest round-trip formatting, so parse → serialize → parse is exact.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::model::{
    ControlSchedule, MediumParams, Outputs, ProbePulse, ProbeShape, Scenario, Segment,
    SpatialProfile, TraceKind,
};
use crate::solver::GridSpec;

/// Physical dimension of a quantity string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Time,
    Rate,
}

/// Parse `"<number> <unit>"` into base units (τ for times, Γ for rates).
pub fn parse_quantity(text: &str, dim: Dimension) -> std::result::Result<f64, String> {
    let text = text.trim();
    let split = text
        .find(|c: char| c.is_whitespace())
        .ok_or_else(|| format!("`{text}` has no unit (expected e.g. \"1.5 utau\" or \"2 gamma\")"))?;
    let (num, unit) = text.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", num.trim()))?;
    if !value.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    let unit = unit.trim();
    let scale = match (dim, unit) {
        (Dimension::Time, "tau") => 1.0,
        (Dimension::Time, "mtau") => 1e-3,
        (Dimension::Time, "utau") => 1e-6,
        (Dimension::Time, "ntau") => 1e-9,
        (Dimension::Rate, "gamma") | (Dimension::Rate, "1/tau") => 1.0,
        (Dimension::Time, _) => return Err(format!("unknown time unit `{unit}` (use tau, mtau, utau, ntau)")),
        (Dimension::Rate, _) => return Err(format!("unknown rate unit `{unit}` (use gamma or 1/tau)")),
    };
    Ok(value * scale)
}

fn fmt_time(v: f64) -> String {
    format!("\"{v:e} tau\"")
}

fn fmt_rate(v: f64) -> String {
    format!("\"{v:e} gamma\"")
}

type Q = Spanned<String>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    description: Option<String>,
    medium: RawMedium,
    probe: RawProbe,
    control: RawControl,
    grid: RawGrid,
    #[serde(default)]
    outputs: RawOutputs,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMedium {
    gamma_decay: Option<Q>,
    gamma_ground: Option<Q>,
    delta_p: Option<Q>,
    delta_c: Option<Q>,
    xi: f64,
    length: Option<f64>,
    spontaneous_decay: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProbe {
    amplitude: Option<[f64; 2]>,
    center_time: Q,
    kappa: Q,
    shape: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawControl {
    profile: RawProfile,
    schedule: RawSchedule,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    kind: Spanned<String>,
    b: Option<Q>,
    zeta: Option<Q>,
    z_focus: Option<f64>,
    rayleigh: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchedule {
    ramp_time: Option<Q>,
    segments: Vec<RawSegment>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSegment {
    t_start: Q,
    gain: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    nz: Option<usize>,
    dt: Option<Q>,
    t_end: Q,
    record_stride: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    snapshot_stride: Option<usize>,
    snapshot_z_stride: Option<usize>,
    trace: Option<Spanned<String>>,
    echo_after: Option<Q>,
    efficiency_cut: Option<Q>,
}

/// A parsed configuration: the scenario plus free-text provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub description: Option<String>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line_of(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn err(&self, field: &str, span: std::ops::Range<usize>, msg: impl std::fmt::Display) -> Error {
        Error::Config(format!("line {}: field `{field}`: {msg}", self.line_of(span.start)))
    }

    fn q(&self, field: &str, q: &Q, dim: Dimension) -> Result<f64> {
        parse_quantity(q.get_ref(), dim).map_err(|m| self.err(field, q.span(), m))
    }

    fn opt_q(&self, field: &str, q: &Option<Q>, dim: Dimension, default: f64) -> Result<f64> {
        q.as_ref().map_or(Ok(default), |q| self.q(field, q, dim))
    }
}

/// Parse configuration text into a scenario.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    let cx = Ctx { text };
    use Dimension::{Rate, Time};

    let m = &raw.medium;
    let medium = MediumParams {
        gamma_decay: cx.opt_q("medium.gamma_decay", &m.gamma_decay, Rate, 1.0)?,
        gamma_ground: cx.opt_q("medium.gamma_ground", &m.gamma_ground, Rate, 0.0)?,
        delta_p: cx.opt_q("medium.delta_p", &m.delta_p, Rate, 0.0)?,
        delta_c: cx.opt_q("medium.delta_c", &m.delta_c, Rate, 0.0)?,
        xi: m.xi,
        length: m.length.unwrap_or(1.0),
        spontaneous_decay: m.spontaneous_decay.unwrap_or(true),
    };

    let p = &raw.probe;
    let shape = match p.shape.as_ref().map(|s| (s.get_ref().as_str(), s.span())) {
        None | Some(("gaussian", _)) => ProbeShape::Gaussian,
        Some(("regularized_delta", _)) => ProbeShape::RegularizedDelta,
        Some((other, span)) => {
            return Err(cx.err("probe.shape", span, format!("unknown shape `{other}` (gaussian, regularized_delta)")))
        }
    };
    let [re, im] = p.amplitude.unwrap_or([1.0, 0.0]);
    let probe = ProbePulse {
        amplitude: Complex64::new(re, im),
        center_time: cx.q("probe.center_time", &p.center_time, Time)?,
        kappa: cx.q("probe.kappa", &p.kappa, Time)?,
        shape,
    };

    let pr = &raw.control.profile;
    let need_rate = |field: &str, q: &Option<Q>| -> Result<f64> {
        match q {
            Some(q) => cx.q(field, q, Rate),
            None => Err(cx.err(field, pr.kind.span(), format!("required for `{}` profile", pr.kind.get_ref()))),
        }
    };
    let profile = match pr.kind.get_ref().as_str() {
        "uniform" => SpatialProfile::Uniform { b: need_rate("control.profile.b", &pr.b)? },
        "gaussian_beam" => SpatialProfile::GaussianBeam {
            b: need_rate("control.profile.b", &pr.b)?,
            z_focus: pr.z_focus.unwrap_or(medium.length),
            rayleigh: pr.rayleigh.ok_or_else(|| {
                cx.err("control.profile.rayleigh", pr.kind.span(), "required for `gaussian_beam` profile")
            })?,
        },
        "linear" => SpatialProfile::Linear { zeta: need_rate("control.profile.zeta", &pr.zeta)? },
        other => {
            return Err(cx.err(
                "control.profile.kind",
                pr.kind.span(),
                format!("unknown profile `{other}` (uniform, gaussian_beam, linear)"),
            ))
        }
    };

    let sc = &raw.control.schedule;
    let mut segments = Vec::with_capacity(sc.segments.len());
    for (i, seg) in sc.segments.iter().enumerate() {
        segments.push(Segment {
            t_start: cx.q(&format!("control.schedule.segments[{i}].t_start"), &seg.t_start, Time)?,
            gain: seg.gain,
        });
    }
    let schedule = ControlSchedule {
        segments,
        ramp_time: cx.opt_q("control.schedule.ramp_time", &sc.ramp_time, Time, 0.0)?,
    };

    let g = &raw.grid;
    let grid = GridSpec {
        nz: g.nz.unwrap_or(crate::solver::DEFAULT_NZ),
        dt: g.dt.as_ref().map(|q| cx.q("grid.dt", q, Time)).transpose()?,
        t_end: cx.q("grid.t_end", &g.t_end, Time)?,
        record_stride: g.record_stride,
    };

    let o = &raw.outputs;
    let defaults = Outputs::default();
    let trace = match o.trace.as_ref().map(|s| (s.get_ref().as_str(), s.span())) {
        None => defaults.trace,
        Some(("transmitted", _)) => TraceKind::Transmitted,
        Some(("scattered", _)) => TraceKind::Scattered,
        Some((other, span)) => {
            return Err(cx.err("outputs.trace", span, format!("unknown trace `{other}` (transmitted, scattered)")))
        }
    };
    let outputs = Outputs {
        snapshot_stride: o.snapshot_stride.unwrap_or(defaults.snapshot_stride),
        snapshot_z_stride: o.snapshot_z_stride.unwrap_or(defaults.snapshot_z_stride),
        trace,
        echo_after: o.echo_after.as_ref().map(|q| cx.q("outputs.echo_after", q, Time)).transpose()?,
        efficiency_cut: o
            .efficiency_cut
            .as_ref()
            .map(|q| cx.q("outputs.efficiency_cut", q, Time))
            .transpose()?,
    };

    let scenario = Scenario {
        name: raw.name.unwrap_or_else(|| "unnamed".into()),
        medium,
        profile,
        schedule,
        probe,
        grid,
        outputs,
    };
    scenario.check_structure().map_err(|e| Error::Config(e.to_string()))?;
    Ok(ScenarioConfig { scenario, description: raw.description })
}

/// SHA-256 of the canonical serialization; equal hashes mean equal runs.
pub fn scenario_hash(s: &Scenario) -> String {
    hex_digest(to_toml(s, None).as_bytes())
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn toml_string(s: &str) -> String {
    // TOML basic strings share JSON's escapes for the characters we emit.
    serde_json::to_string(s).expect("string serialization cannot fail")
}

/// Serialize a scenario in the configuration grammar.
pub fn to_toml(s: &Scenario, description: Option<&str>) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "name = {}", toml_string(&s.name));
    if let Some(d) = description {
        let _ = writeln!(w, "description = {}", toml_string(d));
    }
    let m = &s.medium;
    let _ = writeln!(w, "\n[medium]");
    let _ = writeln!(w, "gamma_decay = {}", fmt_rate(m.gamma_decay));
    let _ = writeln!(w, "gamma_ground = {}", fmt_rate(m.gamma_ground));
    let _ = writeln!(w, "delta_p = {}", fmt_rate(m.delta_p));
    let _ = writeln!(w, "delta_c = {}", fmt_rate(m.delta_c));
    let _ = writeln!(w, "xi = {:e}", m.xi);
    let _ = writeln!(w, "length = {:e}", m.length);
    let _ = writeln!(w, "spontaneous_decay = {}", m.spontaneous_decay);

    let p = &s.probe;
    let _ = writeln!(w, "\n[probe]");
    let _ = writeln!(w, "amplitude = [{:e}, {:e}]", p.amplitude.re, p.amplitude.im);
    let _ = writeln!(w, "center_time = {}", fmt_time(p.center_time));
    let _ = writeln!(w, "kappa = {}", fmt_time(p.kappa));
    let shape = match p.shape {
        ProbeShape::Gaussian => "gaussian",
        ProbeShape::RegularizedDelta => "regularized_delta",
    };
    let _ = writeln!(w, "shape = \"{shape}\"");

    let _ = writeln!(w, "\n[control.profile]");
    let _ = writeln!(w, "kind = \"{}\"", s.profile.kind_name());
    match s.profile {
        SpatialProfile::Uniform { b } => {
            let _ = writeln!(w, "b = {}", fmt_rate(b));
        }
        SpatialProfile::GaussianBeam { b, z_focus, rayleigh } => {
            let _ = writeln!(w, "b = {}", fmt_rate(b));
            let _ = writeln!(w, "z_focus = {z_focus:e}");
            let _ = writeln!(w, "rayleigh = {rayleigh:e}");
        }
        SpatialProfile::Linear { zeta } => {
            let _ = writeln!(w, "zeta = {}", fmt_rate(zeta));
        }
    }

    let _ = writeln!(w, "\n[control.schedule]");
    let _ = writeln!(w, "ramp_time = {}", fmt_time(s.schedule.ramp_time));
    let _ = writeln!(w, "segments = [");
    for seg in &s.schedule.segments {
        let _ = writeln!(w, "  {{ t_start = {}, gain = {:e} }},", fmt_time(seg.t_start), seg.gain);
    }
    let _ = writeln!(w, "]");

    let g = &s.grid;
    let _ = writeln!(w, "\n[grid]");
    let _ = writeln!(w, "nz = {}", g.nz);
    let _ = writeln!(w, "t_end = {}", fmt_time(g.t_end));
    if let Some(dt) = g.dt {
        let _ = writeln!(w, "dt = {}", fmt_time(dt));
    }
    if let Some(r) = g.record_stride {
        let _ = writeln!(w, "record_stride = {r}");
    }

    let o = &s.outputs;
    let _ = writeln!(w, "\n[outputs]");
    let _ = writeln!(w, "snapshot_stride = {}", o.snapshot_stride);
    let _ = writeln!(w, "snapshot_z_stride = {}", o.snapshot_z_stride);
    let _ = writeln!(w, "trace = \"{}\"", o.trace.name());
    if let Some(t) = o.echo_after {
        let _ = writeln!(w, "echo_after = {}", fmt_time(t));
    }
    if let Some(t) = o.efficiency_cut {
        let _ = writeln!(w, "efficiency_cut = {}", fmt_time(t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    const MINIMAL: &str = r#"
name = "mini"

[medium]
xi = 20

[probe]
center_time = "10 mtau"
kappa = "1 mtau"
shape = "regularized_delta"

[control.profile]
kind = "uniform"
b = "0.3 gamma"

[control.schedule]
segments = [{ t_start = "0 tau", gain = 1.0 }]

[grid]
t_end = "10.5 tau"
"#;

    #[test]
    fn parses_minimal_config_with_defaults() {
        let cfg = parse_scenario(MINIMAL).unwrap();
        let s = cfg.scenario;
        assert_eq!(s.medium.gamma_decay, 1.0);
        assert_eq!(s.medium.length, 1.0);
        assert_eq!(s.probe.kappa, 1e-3);
        assert_eq!(s.probe.shape, ProbeShape::RegularizedDelta);
        assert_eq!(s.profile, SpatialProfile::Uniform { b: 0.3 });
        assert_eq!(s.grid.nz, 1024);
        assert_eq!(s.grid.dt, None);
    }

    #[test]
    fn units_are_required() {
        let text = MINIMAL.replace("kappa = \"1 mtau\"", "kappa = \"0.001\"");
        let err = parse_scenario(&text).unwrap_err().to_string();
        assert!(err.contains("probe.kappa"), "{err}");
        assert!(err.contains("no unit"), "{err}");
        assert!(err.contains("line 9"), "{err}");
    }

    #[test]
    fn wrong_dimension_rejected() {
        let text = MINIMAL.replace("b = \"0.3 gamma\"", "b = \"0.3 tau\"");
        let err = parse_scenario(&text).unwrap_err().to_string();
        assert!(err.contains("control.profile.b") && err.contains("unknown rate unit"), "{err}");
    }

    #[test]
    fn missing_field_reports_location() {
        let text = MINIMAL.replace("xi = 20\n", "");
        let err = parse_scenario(&text).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Config(_)));
        assert!(msg.contains("xi") && msg.contains("line"), "{msg}");
    }

    #[test]
    fn unknown_key_rejected() {
        let text = MINIMAL.replace("xi = 20", "xi = 20\noptical_depth = 3");
        assert!(parse_scenario(&text).is_err());
    }

    #[test]
    fn quantity_units() {
        assert_eq!(parse_quantity("1.8 utau", Dimension::Time).unwrap(), 1.8e-6);
        assert_eq!(parse_quantity(" 2e7  gamma ", Dimension::Rate).unwrap(), 2e7);
        assert_eq!(parse_quantity("3 1/tau", Dimension::Rate).unwrap(), 3.0);
        assert!(parse_quantity("3", Dimension::Time).is_err());
        assert!(parse_quantity("x tau", Dimension::Time).is_err());
        assert!(parse_quantity("inf tau", Dimension::Time).is_err());
    }

    #[test]
    fn builtins_round_trip_exactly() {
        for name in builtin::SCENARIO_NAMES {
            let s = builtin::scenario(name).unwrap();
            let text = to_toml(&s, builtin::note(name));
            let back = parse_scenario(&text).unwrap();
            assert_eq!(back.scenario, s, "{name}");
            assert_eq!(to_toml(&back.scenario, back.description.as_deref()), text);
        }
    }
}
