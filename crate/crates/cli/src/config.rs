//! Run configuration: defaults, JSON form, and the flat `key = value` file
//! format. All field names double as config keys.

use std::collections::BTreeMap;

use cdkit_core::counterdiabatic::ScheduleProtocol;
use cdkit_core::landau_zener::LZParams;
use cdkit_core::oscillator::OscillatorParams;
use cdkit_core::qsl::Protocol;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::schedule_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Oscillator,
    LandauZener,
    GenericFile,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::Oscillator => write!(f, "oscillator"),
            Model::LandauZener => write!(f, "landau-zener"),
            Model::GenericFile => write!(f, "generic-file"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorConfig {
    pub omega0: f64,
    pub omega_d: f64,
    pub mass: f64,
    pub tau: f64,
}

impl Default for OscillatorConfig {
    fn default() -> Self {
        // compression ramp of the first case study
        OscillatorConfig {
            omega0: 1.0,
            omega_d: 4.0,
            mass: 1.0,
            tau: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LzConfig {
    pub delta: f64,
    pub g0: f64,
    pub g_d: f64,
    pub tau: f64,
    pub rescaled: bool,
}

impl Default for LzConfig {
    fn default() -> Self {
        // fast sweep through the avoided crossing
        LzConfig {
            delta: 0.01,
            g0: 0.2,
            g_d: -0.4,
            tau: 1.0,
            rescaled: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    #[serde(default)]
    pub oscillator: OscillatorConfig,
    #[serde(default)]
    pub lz: LzConfig,
    /// Path to a sampled-schedule JSON file (generic-file model only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_file: Option<String>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn default_grid_points() -> usize {
    cdkit_core::qsl::DEFAULT_GRID_POINTS
}

fn default_abs_tol() -> f64 {
    cdkit_core::qsl::DEFAULT_ABS_TOL
}

fn default_rel_tol() -> f64 {
    cdkit_core::qsl::DEFAULT_REL_TOL
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: Model::Oscillator,
            oscillator: OscillatorConfig::default(),
            lz: LzConfig::default(),
            schedule_file: None,
            grid_points: default_grid_points(),
            abs_tol: default_abs_tol(),
            rel_tol: default_rel_tol(),
            format: OutputFormat::default(),
            output: None,
        }
    }
}

impl RunConfig {
    /// Checks value-level invariants, reporting the offending field by name.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid_points < 3 {
            return Err(CliError::usage(format!(
                "grid_points: need at least 3, got {}",
                self.grid_points
            )));
        }
        if !(self.abs_tol > 0.0) {
            return Err(CliError::usage(format!(
                "quadrature.abs_tol: must be > 0, got {}",
                self.abs_tol
            )));
        }
        if !(self.rel_tol >= 0.0) {
            return Err(CliError::usage(format!(
                "quadrature.rel_tol: must be >= 0, got {}",
                self.rel_tol
            )));
        }
        if self.model == Model::GenericFile && self.schedule_file.is_none() {
            return Err(CliError::usage(
                "schedule.file: required for the generic-file model",
            ));
        }
        Ok(())
    }

    /// Builds the protocol for the selected model; parameter problems are
    /// usage errors carrying the field name.
    pub fn build_protocol(&self) -> Result<Box<dyn Protocol>, CliError> {
        self.validate()?;
        match self.model {
            Model::Oscillator => {
                let o = &self.oscillator;
                let p = OscillatorParams::with_mass(o.omega0, o.omega_d, o.mass, o.tau)
                    .map_err(CliError::usage_from_core)?;
                Ok(Box::new(p))
            }
            Model::LandauZener => {
                let l = &self.lz;
                let p = LZParams::with_frame(l.delta, l.g0, l.g_d, l.tau, l.rescaled)
                    .map_err(CliError::usage_from_core)?;
                Ok(Box::new(p))
            }
            Model::GenericFile => {
                let path = self.schedule_file.as_ref().expect("validated above");
                let schedule = schedule_file::load(path)?;
                let fd_step =
                    cdkit_core::counterdiabatic::DEFAULT_FD_STEP_FACTOR * schedule.tau();
                let p = ScheduleProtocol::new(schedule, 0, fd_step)
                    .map_err(CliError::usage_from_core)?;
                Ok(Box::new(p))
            }
        }
    }

    /// Like [`Self::build_protocol`] but with the protocol re-timed to the
    /// given duration; used by sweeps.
    pub fn build_protocol_with_tau(&self, tau: f64) -> Result<Box<dyn Protocol>, CliError> {
        let mut cfg = self.clone();
        match cfg.model {
            Model::Oscillator => cfg.oscillator.tau = tau,
            Model::LandauZener => cfg.lz.tau = tau,
            Model::GenericFile => {
                let path = cfg.schedule_file.as_ref().ok_or_else(|| {
                    CliError::usage("schedule.file: required for the generic-file model")
                })?;
                cfg.validate()?;
                let schedule = schedule_file::load_retimed(path, tau)?;
                let fd_step = cdkit_core::counterdiabatic::DEFAULT_FD_STEP_FACTOR * tau;
                let p = ScheduleProtocol::new(schedule, 0, fd_step)
                    .map_err(CliError::usage_from_core)?;
                return Ok(Box::new(p));
            }
        }
        cfg.build_protocol()
    }

    /// Parses a config file: JSON (optionally a full report whose `config`
    /// member is re-ingested) or the flat `key = value` format.
    pub fn from_file(path: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {path}: {e}")))?;
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("config {path}: invalid JSON: {e}")))?;
            let config_value = match value.get("config") {
                Some(inner) => inner.clone(),
                None => value,
            };
            serde_json::from_value(config_value)
                .map_err(|e| CliError::usage(format!("config {path}: {e}")))
        } else {
            Self::from_flat(&text)
        }
    }

    /// Parses the flat `key = value` format. Later assignments win; the
    /// `ramp.*` keys alias the active model's ramp fields.
    pub fn from_flat(text: &str) -> Result<Self, CliError> {
        let mut pairs: BTreeMap<usize, (String, String)> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            pairs.insert(lineno, (key.trim().to_string(), value.trim().to_string()));
        }

        let mut cfg = RunConfig::default();
        for (key, value) in pairs.values() {
            cfg.apply(key, value)?;
        }
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad =
            |key: &str, value: &str| CliError::usage(format!("{key}: cannot parse `{value}`"));
        let number = |key: &str, value: &str| -> Result<f64, CliError> {
            value.parse::<f64>().map_err(|_| bad(key, value))
        };
        match key {
            "model" => {
                self.model = match value {
                    "oscillator" => Model::Oscillator,
                    "landau-zener" => Model::LandauZener,
                    "generic-file" => Model::GenericFile,
                    _ => return Err(bad(key, value)),
                };
            }
            "oscillator.omega0" => self.oscillator.omega0 = number(key, value)?,
            "oscillator.omega_d" => self.oscillator.omega_d = number(key, value)?,
            "oscillator.mass" => self.oscillator.mass = number(key, value)?,
            "oscillator.tau" => self.oscillator.tau = number(key, value)?,
            "lz.delta" => self.lz.delta = number(key, value)?,
            "lz.g0" => self.lz.g0 = number(key, value)?,
            "lz.g_d" => self.lz.g_d = number(key, value)?,
            "lz.tau" => self.lz.tau = number(key, value)?,
            "lz.rescaled" => {
                self.lz.rescaled = value.parse::<bool>().map_err(|_| bad(key, value))?
            }
            "ramp.kind" => {
                if value != "linear" {
                    return Err(CliError::usage(format!(
                        "ramp.kind: only `linear` is supported, got `{value}`"
                    )));
                }
            }
            "ramp.start" => {
                let v = number(key, value)?;
                self.oscillator.omega0 = v;
                self.lz.g0 = v;
            }
            "ramp.delta" => {
                let v = number(key, value)?;
                self.oscillator.omega_d = v;
                self.lz.g_d = v;
            }
            "ramp.tau" => {
                let v = number(key, value)?;
                self.oscillator.tau = v;
                self.lz.tau = v;
            }
            "schedule.file" => self.schedule_file = Some(value.to_string()),
            "grid_points" => {
                self.grid_points = value.parse::<usize>().map_err(|_| bad(key, value))?
            }
            "quadrature.abs_tol" => self.abs_tol = number(key, value)?,
            "quadrature.rel_tol" => self.rel_tol = number(key, value)?,
            "format" => {
                self.format = match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    _ => return Err(bad(key, value)),
                };
            }
            "output" => self.output = Some(value.to_string()),
            _ => return Err(CliError::usage(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }
}
