//! JSON instance files.
//!
//! ```json
//! {
//!   "l": 3, "m": 2,
//!   "alpha": [0.5, 1.0, 1.5],
//!   "beta": [2.0, 1.0],
//!   "rho": [{"base": 2, "num": 1, "den": 3}, 1.26, ...],
//!   "window": {"t_min": 0, "t_max": 1},
//!   "tolerance": 1e-9,
//!   "samples_per_piece": 8
//! }
//! ```
//!
//! `rho` entries are decimals or exact powers `base^(num/den)`. Weights have no
//! defaults; `window` defaults to the single period `t = 0`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analyze::DEFAULT_TOLERANCE;
use crate::construct::{PowerForm, RegularGraph, Rho, RhoSchedule};
use crate::weights::{Weights, BALANCE_TOLERANCE};
use crate::Error;

pub const DEFAULT_SAMPLES_PER_PIECE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoEntry {
    Value(f64),
    Power(PowerForm),
}

impl RhoEntry {
    fn to_rho(self) -> Rho {
        match self {
            RhoEntry::Value(v) => Rho::from_value(v),
            RhoEntry::Power(p) => Rho::from_power(p),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub t_min: i64,
    pub t_max: i64,
}

/// The file as written, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub l: usize,
    pub m: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub rho: Vec<RhoEntry>,
    #[serde(default)]
    pub window: Window,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_piece: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
}

impl ConfigError {
    fn validation(field: impl Into<String>, message: impl ToString) -> Self {
        ConfigError::Validation { field: field.into(), message: message.to_string() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::Io { .. } => "IoError",
            ConfigError::Parse(_) => "ParseError",
            ConfigError::Validation { .. } => "ValidationError",
        }
    }

    /// Single-line JSON description for scripts.
    pub fn to_json_line(&self) -> String {
        let value = match self {
            ConfigError::Validation { field, message } => {
                serde_json::json!({ "error": self.kind(), "field": field, "message": message })
            }
            other => serde_json::json!({ "error": other.kind(), "message": other.to_string() }),
        };
        value.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceConfig {
    pub raw: RawConfig,
    pub weights: Weights,
    pub rho: RhoSchedule,
    pub window: Window,
    pub tolerance: f64,
    pub samples_per_piece: usize,
}

impl InstanceConfig {
    pub fn graph(&self) -> crate::Result<RegularGraph> {
        RegularGraph::build(self.weights.clone(), self.rho.clone())
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<InstanceConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<InstanceConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    validate(raw)
}

fn weight_field(err: &Error) -> String {
    match err {
        Error::NegativeWeight { side, index, .. } | Error::NonFiniteWeight { side, index } => {
            format!("{side}[{}]", index - 1)
        }
        Error::LengthMismatch { side, .. } => side.to_string(),
        _ => "beta".to_string(),
    }
}

pub fn validate(raw: RawConfig) -> Result<InstanceConfig, ConfigError> {
    if raw.l == 0 {
        return Err(ConfigError::validation("l", "must be at least 1"));
    }
    if raw.m == 0 {
        return Err(ConfigError::validation("m", "must be at least 1"));
    }
    let weights = Weights::validate(raw.l, raw.m, raw.alpha.clone(), raw.beta.clone(), BALANCE_TOLERANCE)
        .map_err(|e| ConfigError::validation(weight_field(&e), e))?;
    if raw.rho.len() != weights.k() {
        return Err(ConfigError::validation(
            "rho",
            Error::RhoLength { expected: weights.k(), got: raw.rho.len() },
        ));
    }
    let rho = RhoSchedule::new(raw.rho.iter().map(|e| e.to_rho()).collect()).map_err(|e| {
        let field = match e {
            Error::RhoNotExpanding { index, .. } | Error::InvalidPowerForm { index, .. } => format!("rho[{}]", index - 1),
            _ => "rho".to_string(),
        };
        ConfigError::validation(field, e)
    })?;
    if raw.window.t_min > raw.window.t_max {
        return Err(ConfigError::validation(
            "window",
            Error::EmptyWindow { t_min: raw.window.t_min, t_max: raw.window.t_max },
        ));
    }
    let tolerance = raw.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(ConfigError::validation("tolerance", "must be a finite number > 0"));
    }
    Ok(InstanceConfig {
        window: raw.window,
        samples_per_piece: raw.samples_per_piece.unwrap_or(DEFAULT_SAMPLES_PER_PIECE),
        tolerance,
        weights,
        rho,
        raw,
    })
}
