//! Run configuration: one TOML document, validated field by field so that
//! every error names the offending key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use gamma_lagrangians::geometry::{MetricSpec, Point, Profile, PRESET_NAMES};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::claims;

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_FD_STEP: f64 = 1e-3;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Spectra,
    Gauge,
    Gravity,
    Extended,
    Dynamics,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["identities", "spectra", "gauge", "gravity", "extended", "dynamics", "all"];

    pub const COMPONENTS: [Suite; 6] =
        [Suite::Identities, Suite::Spectra, Suite::Gauge, Suite::Gravity, Suite::Extended, Suite::Dynamics];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::NAMES.iter().position(|n| *n == s).map(|i| match i {
            0 => Suite::Identities,
            1 => Suite::Spectra,
            2 => Suite::Gauge,
            3 => Suite::Gravity,
            4 => Suite::Extended,
            5 => Suite::Dynamics,
            _ => Suite::All,
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Initial data and step for trajectory runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub steps: usize,
    pub x0: Point,
    pub xdot0: [f64; 4],
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 0.05, steps: 20, x0: [0.0; 4], xdot0: [1.0, 0.2, -0.1, 0.1] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub suite: Suite,
    /// Geometry override for the gravity and dynamics suites and `simulate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
    pub seed: u64,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    pub fd_step: f64,
    pub integrator: IntegratorConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            metric: None,
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            tolerances: BTreeMap::new(),
            fd_step: DEFAULT_FD_STEP,
            integrator: IntegratorConfig::default(),
            output: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

fn err<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError { path: path.into(), message: message.into() })
}

const TOP_LEVEL_KEYS: [&str; 8] =
    ["suite", "metric", "seed", "trials", "tolerances", "fd_step", "integrator", "output"];
const INTEGRATOR_KEYS: [&str; 4] = ["dt", "steps", "x0", "xdot0"];

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let table: Table = match text.parse() {
        Ok(t) => t,
        Err(e) => return err("document", e.message().to_string()),
    };
    let mut cfg = RunConfig::default();
    for key in table.keys() {
        if !TOP_LEVEL_KEYS.contains(&key.as_str()) {
            return err(key.clone(), "unknown field");
        }
    }
    if let Some(v) = table.get("suite") {
        let name = as_str(v, "suite")?;
        cfg.suite = Suite::parse(name).ok_or_else(|| ConfigError {
            path: "suite".into(),
            message: format!("unknown suite `{name}`, expected one of {}", Suite::NAMES.join(", ")),
        })?;
    }
    if let Some(v) = table.get("seed") {
        let s = as_int(v, "seed")?;
        if s < 0 {
            return err("seed", "must be a non-negative integer");
        }
        cfg.seed = s as u64;
    }
    if let Some(v) = table.get("trials") {
        let t = as_int(v, "trials")?;
        if t < 1 {
            return err("trials", format!("must be ≥ 1, got {t}"));
        }
        cfg.trials = t as usize;
    }
    if let Some(v) = table.get("fd_step") {
        cfg.fd_step = positive(v, "fd_step")?;
    }
    if let Some(v) = table.get("output") {
        cfg.output = Some(PathBuf::from(as_str(v, "output")?));
    }
    if let Some(v) = table.get("tolerances") {
        let Value::Table(t) = v else {
            return err("tolerances", "expected a table of check name to tolerance");
        };
        for (name, tol) in t {
            let path = format!("tolerances.{name}");
            if claims::find(name).is_none() {
                return err(path, "unknown check");
            }
            cfg.tolerances.insert(name.clone(), positive(tol, &path)?);
        }
    }
    if let Some(v) = table.get("integrator") {
        let Value::Table(t) = v else {
            return err("integrator", "expected a table");
        };
        for key in t.keys() {
            if !INTEGRATOR_KEYS.contains(&key.as_str()) {
                return err(format!("integrator.{key}"), "unknown field");
            }
        }
        let it = &mut cfg.integrator;
        if let Some(v) = t.get("dt") {
            it.dt = positive(v, "integrator.dt")?;
        }
        if let Some(v) = t.get("steps") {
            let n = as_int(v, "integrator.steps")?;
            if n < 1 {
                return err("integrator.steps", format!("must be ≥ 1, got {n}"));
            }
            it.steps = n as usize;
        }
        if let Some(v) = t.get("x0") {
            it.x0 = vec4(v, "integrator.x0")?;
        }
        if let Some(v) = t.get("xdot0") {
            it.xdot0 = vec4(v, "integrator.xdot0")?;
        }
    }
    if let Some(v) = table.get("metric") {
        cfg.metric = Some(parse_metric(v)?);
    }
    Ok(cfg)
}

/// Profiles used when a `conformal-diagonal` metric is given without any.
pub fn default_conformal_profiles() -> [Profile; 4] {
    [
        Profile::Affine { offset: 1.0, slope: [0.1, 0.3, 0.0, -0.2] },
        Profile::Exponential { amplitude: 1.0, rate: [0.2, 0.0, 0.1, 0.0] },
        Profile::constant(1.0),
        Profile::Affine { offset: 1.2, slope: [0.0, 0.1, 0.25, 0.0] },
    ]
}

fn parse_metric(v: &Value) -> Result<MetricSpec, ConfigError> {
    let mut t = match v {
        Value::String(name) => {
            let mut t = Table::new();
            t.insert("preset".into(), Value::String(name.clone()));
            t
        }
        Value::Table(t) => t.clone(),
        _ => return err("metric", "expected a preset name or a table"),
    };
    let Some(preset) = t.get("preset") else {
        return err("metric.preset", "missing");
    };
    let preset = as_str(preset, "metric.preset")?.to_string();
    if !PRESET_NAMES.contains(&preset.as_str()) {
        return err("metric.preset", format!("unknown preset `{preset}`, expected one of {}", PRESET_NAMES.join(", ")));
    }
    match preset.as_str() {
        "schwarzschild-isotropic" if !t.contains_key("mass") => {
            t.insert("mass".into(), Value::Float(1.0));
        }
        "conformal-diagonal" if !t.contains_key("profiles") => {
            let profiles = Value::try_from(default_conformal_profiles()).expect("profiles serialize");
            t.insert("profiles".into(), profiles);
        }
        _ => {}
    }
    let spec: MetricSpec = Value::Table(t)
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError { path: "metric".into(), message: e.message().to_string() })?;
    if let MetricSpec::SchwarzschildIsotropic { mass } = spec {
        if !(mass > 0.0 && mass.is_finite()) {
            return err("metric.mass", format!("must be positive, got {mass}"));
        }
    }
    spec.build().map_err(|e| ConfigError { path: "metric".into(), message: e.to_string() })?;
    Ok(spec)
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, ConfigError> {
    v.as_str()
        .ok_or_else(|| ConfigError { path: path.into(), message: format!("expected a string, got {}", v.type_str()) })
}

fn as_int(v: &Value, path: &str) -> Result<i64, ConfigError> {
    v.as_integer()
        .ok_or_else(|| ConfigError { path: path.into(), message: format!("expected an integer, got {}", v.type_str()) })
}

fn as_float(v: &Value, path: &str) -> Result<f64, ConfigError> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => err(path, format!("expected a number, got {}", v.type_str())),
    }
}

fn positive(v: &Value, path: &str) -> Result<f64, ConfigError> {
    let x = as_float(v, path)?;
    if !(x > 0.0 && x.is_finite()) {
        return err(path, format!("must be positive, got {x}"));
    }
    Ok(x)
}

fn vec4(v: &Value, path: &str) -> Result<[f64; 4], ConfigError> {
    let Some(items) = v.as_array() else {
        return err(path, "expected an array of four numbers");
    };
    if items.len() != 4 {
        return err(path, format!("expected four entries, got {}", items.len()));
    }
    let mut out = [0.0; 4];
    for (k, item) in items.iter().enumerate() {
        out[k] = as_float(item, &format!("{path}[{k}]"))?;
        if !out[k].is_finite() {
            return err(format!("{path}[{k}]"), "must be finite");
        }
    }
    Ok(out)
}
