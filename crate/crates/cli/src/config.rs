//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! splitting_ueV = 0.32
//! settings = rectilinear, diagonal, circular, chsh
//! custom_setting = tilted | xx: hwp 10, pol 0 | x: pol 0
//! ```
//!
//! Keys carry their unit as a suffix. Unknown and repeated keys are errors
//! (except `custom_setting`, which may appear any number of times).

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use qdbell::events::{AnalyzerSetting, RunManifest, DEFAULT_SEED};
use qdbell::source::SourceConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

const SOURCE_KEYS: [&str; 11] = [
    "splitting_ueV",
    "tau_xx_ns",
    "tau_x_ns",
    "pulse_width_ns",
    "rep_period_ns",
    "background_fraction",
    "tau_bg_ns",
    "reexcite_prob",
    "dark_rate_hz",
    "detect_efficiency",
    "emission_prob",
];

const OTHER_KEYS: [&str; 9] = [
    "settings",
    "custom_setting",
    "pulses_per_setting",
    "seed",
    "gate_xx_center_ns",
    "gate_xx_width_ns",
    "gate_x_center_ns",
    "gate_x_width_ns",
    "events_out",
];

pub const DEFAULT_GATE_XX_WIDTH_NS: f64 = 1.0;
pub const DEFAULT_GATE_X_WIDTH_NS: f64 = 1.5;

/// Gate windows as configured. A missing centre means "the arrival-time
/// peak of that channel".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    pub xx_center_ns: Option<f64>,
    pub xx_width_ns: f64,
    pub x_center_ns: Option<f64>,
    pub x_width_ns: f64,
}

impl Default for GateSpec {
    fn default() -> Self {
        Self {
            xx_center_ns: None,
            xx_width_ns: DEFAULT_GATE_XX_WIDTH_NS,
            x_center_ns: None,
            x_width_ns: DEFAULT_GATE_X_WIDTH_NS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: SourceConfig,
    pub settings: Vec<AnalyzerSetting>,
    pub pulses_per_setting: u64,
    pub seed: u64,
    pub gate: GateSpec,
    pub events_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values: HashMap<&str, (usize, &str)> = HashMap::new();
        let mut custom = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                reason: format!("expected `key = value`, got {content:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !SOURCE_KEYS.contains(&key) && !OTHER_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if key == "custom_setting" {
                custom.push((line, value));
            } else if values.insert(key, (line, value)).is_some() {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
        }
        let required = SOURCE_KEYS.iter().filter(|k| **k != "emission_prob");
        for key in required.chain(&["settings", "pulses_per_setting"]) {
            if !values.contains_key(key) {
                return Err(ConfigError::Missing(key));
            }
        }

        let number = |key: &'static str| -> Result<Option<f64>, ConfigError> {
            values
                .get(key)
                .map(|&(line, v)| {
                    v.parse::<f64>().map_err(|_| ConfigError::Syntax {
                        line,
                        reason: format!("`{key}` must be a number, got {v:?}"),
                    })
                })
                .transpose()
        };
        let required = |key: &'static str| number(key).map(|v| v.expect("presence checked"));

        let source = SourceConfig {
            splitting_uev: required("splitting_ueV")?,
            tau_xx_ns: required("tau_xx_ns")?,
            tau_x_ns: required("tau_x_ns")?,
            pulse_width_ns: required("pulse_width_ns")?,
            rep_period_ns: required("rep_period_ns")?,
            background_fraction: required("background_fraction")?,
            tau_bg_ns: required("tau_bg_ns")?,
            reexcite_prob: required("reexcite_prob")?,
            dark_rate_hz: required("dark_rate_hz")?,
            detect_efficiency: required("detect_efficiency")?,
            emission_prob: number("emission_prob")?.unwrap_or(1.0),
        };
        source
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;

        let integer = |key: &'static str| -> Result<Option<u64>, ConfigError> {
            values
                .get(key)
                .map(|&(line, v)| {
                    v.replace('_', "").parse::<u64>().map_err(|_| ConfigError::Syntax {
                        line,
                        reason: format!("`{key}` must be a non-negative integer, got {v:?}"),
                    })
                })
                .transpose()
        };
        let pulses_per_setting = integer("pulses_per_setting")?.expect("presence checked");
        let seed = integer("seed")?.unwrap_or(DEFAULT_SEED);

        let (settings_line, settings_value) = values["settings"];
        let mut settings = Vec::new();
        for name in settings_value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let id = settings.len() as u32;
            match name {
                "rectilinear" => settings.push(AnalyzerSetting::rectilinear(id)),
                "diagonal" => settings.push(AnalyzerSetting::diagonal(id)),
                "circular" => settings.push(AnalyzerSetting::circular(id)),
                "chsh" => settings.extend(AnalyzerSetting::chsh_set(id)),
                other => {
                    return Err(ConfigError::Syntax {
                        line: settings_line,
                        reason: format!(
                            "unknown setting {other:?}; expected rectilinear, diagonal, circular or chsh"
                        ),
                    })
                }
            }
        }
        for (line, text) in custom {
            let id = settings.len() as u32;
            let s = AnalyzerSetting::parse(id, text).map_err(|e| ConfigError::Syntax {
                line,
                reason: e.to_string(),
            })?;
            settings.push(s);
        }

        let gate = GateSpec {
            xx_center_ns: number("gate_xx_center_ns")?,
            xx_width_ns: number("gate_xx_width_ns")?.unwrap_or(DEFAULT_GATE_XX_WIDTH_NS),
            x_center_ns: number("gate_x_center_ns")?,
            x_width_ns: number("gate_x_width_ns")?.unwrap_or(DEFAULT_GATE_X_WIDTH_NS),
        };
        let events_out = values.get("events_out").map(|&(_, v)| PathBuf::from(v));

        let config = Self {
            source,
            settings,
            pulses_per_setting,
            seed,
            gate,
            events_out,
        };
        config.manifest(None)?;
        Ok(config)
    }

    /// The run manifest, with the seed optionally replaced.
    pub fn manifest(&self, seed: Option<u64>) -> Result<RunManifest, ConfigError> {
        RunManifest::new(
            self.source,
            self.settings.clone(),
            self.pulses_per_setting,
            seed.unwrap_or(self.seed),
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}
