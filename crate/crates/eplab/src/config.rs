//! Run configuration: a small TOML grammar validated into live model types.
//!
//! A config file describes the physical system (`[[levels]]`, `[coupling]`,
//! optional `topology`) plus what to do with it (`[sweep]`, `[scattering]`,
//! `[output]`).  Parsing is strict — unknown keys are rejected — and every
//! semantic error names the offending field.

use std::fmt;
use std::fs;
use std::path::Path;

use epcore::model::{CouplingLaw, EnergyCurve, LevelSpec, SystemConfig, Topology};
use epcore::sweep::{SweepParam, SweepPlan};
use num_complex::Complex64;
use serde::Deserialize;

/// Default `a`-sweep range; starts off zero to stay clear of the square-root
/// curve's domain edge.
pub const DEFAULT_A_RANGE: (f64, f64) = (0.01, 2.0);
/// Default number of grid points for an `a` sweep.
pub const DEFAULT_A_STEPS: usize = 1000;
/// Default number of grid points for a `y` sweep.
pub const DEFAULT_Y_STEPS: usize = 500;
/// Default number of points on a cross-section energy grid.
pub const DEFAULT_ENERGY_POINTS: usize = 801;

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    /// TOML syntax or type error; the message carries line/column context.
    Parse(String),
    /// Structurally valid but inconsistent; `path` names the field.
    Semantic { path: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(e) => write!(f, "cannot read config: {e}"),
            Self::Parse(msg) => write!(f, "config parse error: {msg}"),
            Self::Semantic { path, message } => write!(f, "config error at {path}: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn semantic(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Semantic { path: path.into(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// Energy-grid request for cross-section actions.  Missing bounds mean
/// "derive from the resonance positions and widths".
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSpec {
    pub a: Option<f64>,
    pub energy_min: Option<f64>,
    pub energy_max: Option<f64>,
    pub energy_points: usize,
}

/// A validated configuration, ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub sweep: Option<SweepPlan>,
    pub scattering: Option<ScatteringSpec>,
    pub format: OutputFormat,
    /// Output file stem override.
    pub prefix: Option<String>,
}

// ---------------------------------------------------------------------------
// On-disk shape
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    topology: Option<String>,
    #[serde(default)]
    levels: Vec<LevelSection>,
    coupling: Option<CouplingSection>,
    sweep: Option<SweepSection>,
    scattering: Option<ScatteringSection>,
    output: Option<OutputSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelSection {
    kind: String,
    c0: Option<f64>,
    c1: Option<f64>,
    c: Option<f64>,
    points: Option<Vec<(f64, f64)>>,
    gamma_half: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CouplingSection {
    mode: String,
    omega: Option<[f64; 2]>,
    omega0: Option<f64>,
    y: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    param: String,
    start: f64,
    stop: f64,
    steps: Option<usize>,
    fixed_a: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScatteringSection {
    a: Option<f64>,
    energy_min: Option<f64>,
    energy_max: Option<f64>,
    energy_points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    format: Option<String>,
    prefix: Option<String>,
}

// ---------------------------------------------------------------------------
// Loading and validation
// ---------------------------------------------------------------------------

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(ConfigError::Io)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let file: FileConfig =
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    build(file)
}

fn build(file: FileConfig) -> Result<RunConfig, ConfigError> {
    if file.levels.len() < 2 {
        return Err(semantic("levels", "at least 2 [[levels]] sections are required"));
    }
    let levels = file
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| build_level(i, l))
        .collect::<Result<Vec<_>, _>>()?;

    let coupling_section =
        file.coupling.as_ref().ok_or_else(|| semantic("coupling", "section is required"))?;
    let coupling = build_coupling(coupling_section)?;

    let topology = match file.topology.as_deref() {
        None => {
            if levels.len() == 2 {
                Topology::Pair
            } else {
                Topology::Star
            }
        }
        Some("pair") => Topology::Pair,
        Some("star") => Topology::Star,
        Some(other) => {
            return Err(semantic("topology", format!("unknown topology \"{other}\" (expected \"pair\" or \"star\")")))
        }
    };

    let system = SystemConfig::new(levels, coupling, topology)
        .map_err(|e| semantic("levels", e.to_string()))?;

    let sweep = match &file.sweep {
        None => None,
        Some(s) => Some(build_sweep(s, &system)?),
    };

    let scattering = match &file.scattering {
        None => None,
        Some(s) => Some(build_scattering(s)?),
    };

    let (format, prefix) = match &file.output {
        None => (OutputFormat::Csv, None),
        Some(o) => {
            let format = match o.format.as_deref() {
                None => OutputFormat::Csv,
                Some(f) => OutputFormat::parse(f).ok_or_else(|| {
                    semantic("output.format", format!("unknown format \"{f}\" (expected \"csv\" or \"json\")"))
                })?,
            };
            if let Some(p) = &o.prefix {
                if p.is_empty() || p.contains(['/', '\\']) {
                    return Err(semantic("output.prefix", "must be a bare file stem"));
                }
            }
            (format, o.prefix.clone())
        }
    };

    Ok(RunConfig { system, sweep, scattering, format, prefix })
}

fn build_level(i: usize, l: &LevelSection) -> Result<LevelSpec, ConfigError> {
    let at = |field: &str| format!("levels[{i}].{field}");
    let require = |opt: Option<f64>, field: &str, kind: &str| {
        opt.ok_or_else(|| semantic(at(field), format!("required for kind = \"{kind}\"")))
    };
    let forbid = |present: bool, field: &str, kind: &str| -> Result<(), ConfigError> {
        if present {
            Err(semantic(at(field), format!("not valid for kind = \"{kind}\"")))
        } else {
            Ok(())
        }
    };

    let curve = match l.kind.as_str() {
        "linear" => {
            forbid(l.c.is_some(), "c", "linear")?;
            forbid(l.points.is_some(), "points", "linear")?;
            EnergyCurve::linear(require(l.c0, "c0", "linear")?, require(l.c1, "c1", "linear")?)
        }
        "sqrt" => {
            forbid(l.c0.is_some(), "c0", "sqrt")?;
            forbid(l.c1.is_some(), "c1", "sqrt")?;
            forbid(l.points.is_some(), "points", "sqrt")?;
            EnergyCurve::sqrt(require(l.c, "c", "sqrt")?)
        }
        "tabulated" => {
            forbid(l.c0.is_some(), "c0", "tabulated")?;
            forbid(l.c1.is_some(), "c1", "tabulated")?;
            forbid(l.c.is_some(), "c", "tabulated")?;
            let points = l
                .points
                .clone()
                .ok_or_else(|| semantic(at("points"), "required for kind = \"tabulated\""))?;
            EnergyCurve::Tabulated { points }
        }
        other => {
            return Err(semantic(
                at("kind"),
                format!("unknown curve kind \"{other}\" (expected \"linear\", \"sqrt\", or \"tabulated\")"),
            ))
        }
    };

    if l.gamma_half > 0.0 {
        return Err(semantic(at("gamma_half"), "must be <= 0"));
    }
    LevelSpec::new(curve, l.gamma_half).map_err(|e| semantic(format!("levels[{i}]"), e.to_string()))
}

fn build_coupling(c: &CouplingSection) -> Result<CouplingLaw, ConfigError> {
    let omega = || {
        c.omega.map(|[re, im]| Complex64::new(re, im)).ok_or_else(|| {
            semantic("coupling.omega", format!("required for mode = \"{}\" (as [re, im])", c.mode))
        })
    };
    let forbid = |present: bool, field: &str| -> Result<(), ConfigError> {
        if present {
            Err(semantic(
                format!("coupling.{field}"),
                format!("not valid for mode = \"{}\"", c.mode),
            ))
        } else {
            Ok(())
        }
    };

    let law = match c.mode.as_str() {
        "constant" => {
            forbid(c.omega0.is_some(), "omega0")?;
            forbid(c.y.is_some(), "y")?;
            CouplingLaw::constant(omega()?)
        }
        "gaussian" => {
            forbid(c.omega0.is_some(), "omega0")?;
            forbid(c.y.is_some(), "y")?;
            CouplingLaw::gaussian(omega()?)
        }
        "y-param" => {
            forbid(c.omega.is_some(), "omega")?;
            let omega0 = c
                .omega0
                .ok_or_else(|| semantic("coupling.omega0", "required for mode = \"y-param\""))?;
            CouplingLaw::y_parametrized(omega0, c.y.unwrap_or(0.0))
                .map_err(|e| semantic("coupling", e.to_string()))?
        }
        other => {
            return Err(semantic(
                "coupling.mode",
                format!("unknown mode \"{other}\" (expected \"constant\", \"gaussian\", or \"y-param\")"),
            ))
        }
    };
    law.validate().map_err(|e| semantic("coupling", e.to_string()))?;
    Ok(law)
}

fn build_sweep(s: &SweepSection, system: &SystemConfig) -> Result<SweepPlan, ConfigError> {
    let param = match s.param.as_str() {
        "a" => SweepParam::A,
        "y" => SweepParam::Y,
        other => {
            return Err(semantic(
                "sweep.param",
                format!("unknown parameter \"{other}\" (expected \"a\" or \"y\")"),
            ))
        }
    };
    if param == SweepParam::A && s.fixed_a.is_some() {
        return Err(semantic("sweep.fixed_a", "only valid for param = \"y\""));
    }
    let steps = s.steps.unwrap_or(match param {
        SweepParam::A => DEFAULT_A_STEPS,
        SweepParam::Y => DEFAULT_Y_STEPS,
    });
    SweepPlan::new(system.clone(), param, s.start, s.stop, steps, s.fixed_a)
        .map_err(|e| semantic("sweep", e.to_string()))
}

fn build_scattering(s: &ScatteringSection) -> Result<ScatteringSpec, ConfigError> {
    if let (Some(lo), Some(hi)) = (s.energy_min, s.energy_max) {
        // NaN bounds must fail this check too
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return Err(semantic("scattering.energy_min", "must be strictly below energy_max"));
        }
    }
    if s.energy_min.is_some() != s.energy_max.is_some() {
        return Err(semantic(
            "scattering.energy_min",
            "energy_min and energy_max must be given together",
        ));
    }
    let energy_points = s.energy_points.unwrap_or(DEFAULT_ENERGY_POINTS);
    if energy_points < 2 {
        return Err(semantic("scattering.energy_points", "needs at least 2 points"));
    }
    Ok(ScatteringSpec {
        a: s.a,
        energy_min: s.energy_min,
        energy_max: s.energy_max,
        energy_points,
    })
}

// ---------------------------------------------------------------------------
// Serialization (config round-trips for presets)
// ---------------------------------------------------------------------------

/// Renders a system plus an optional sweep plan as a config file that
/// [`parse_config`] accepts and reloads to equal values.  Floats are written
/// in shortest round-trip form.
pub fn to_toml(system: &SystemConfig, plan: Option<&SweepPlan>) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    match system.topology() {
        Topology::Pair => out.push_str("topology = \"pair\"\n"),
        Topology::Star => out.push_str("topology = \"star\"\n"),
    }
    for level in system.levels() {
        out.push_str("\n[[levels]]\n");
        match &level.curve {
            EnergyCurve::Linear { c0, c1 } => {
                let _ = writeln!(out, "kind = \"linear\"\nc0 = {c0:?}\nc1 = {c1:?}");
            }
            EnergyCurve::Sqrt { c } => {
                let _ = writeln!(out, "kind = \"sqrt\"\nc = {c:?}");
            }
            EnergyCurve::Tabulated { points } => {
                out.push_str("kind = \"tabulated\"\npoints = [");
                for (k, (a, e)) in points.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "[{a:?}, {e:?}]");
                }
                out.push_str("]\n");
            }
        }
        let _ = writeln!(out, "gamma_half = {:?}", level.gamma_half);
    }
    out.push_str("\n[coupling]\n");
    match system.coupling() {
        CouplingLaw::Constant { omega } => {
            let _ = writeln!(out, "mode = \"constant\"\nomega = [{:?}, {:?}]", omega.re, omega.im);
        }
        CouplingLaw::Gaussian { omega } => {
            let _ = writeln!(out, "mode = \"gaussian\"\nomega = [{:?}, {:?}]", omega.re, omega.im);
        }
        CouplingLaw::YParametrized { omega0, y } => {
            let _ = writeln!(out, "mode = \"y-param\"\nomega0 = {omega0:?}\ny = {y:?}");
        }
    }
    if let Some(plan) = plan {
        out.push_str("\n[sweep]\n");
        let _ = writeln!(
            out,
            "param = \"{}\"\nstart = {:?}\nstop = {:?}\nsteps = {}",
            plan.param.as_str(),
            plan.start,
            plan.stop,
            plan.steps
        );
        if let Some(a) = plan.fixed_other {
            let _ = writeln!(out, "fixed_a = {a:?}");
        }
    }
    out
}
