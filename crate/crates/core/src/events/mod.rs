//! Monte-Carlo detection events for the biexciton (XX) and exciton (X)
//! channels.
//!
//! Each channel ends in a polarizing element with two monitored outputs, so a
//! detection is tagged with the port it left through ([`Outcome::Pass`] or
//! [`Outcome::Orthogonal`]) rather than needing a second run per orientation.

mod generate;
mod io;
mod setting;

pub use generate::{
    generate_pulses, generate_run, generate_setting, sample_emission_times, GeneratedSetting,
};
pub use io::{read_events, write_events, EventFile};
pub use setting::{AnalyzerChain, AnalyzerSetting, OpticalElement};

use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::polarization::PolarizationError;
use crate::source::{SourceConfig, SourceError};

pub const DEFAULT_SEED: u64 = 0x5EED_0F_B1E5;

#[derive(Debug, Error)]
pub enum EventError {
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error("setting {label:?}: {reason}")]
    InvalidSetting { label: String, reason: String },
    #[error("invalid manifest: {0}")]
    InvalidManifest(String),
    #[error(transparent)]
    Polarization(#[from] PolarizationError),
    #[error("event file line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("event file digest {found} does not match its header ({expected})")]
    DigestMismatch { expected: String, found: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    /// Biexciton photon, the first of the cascade.
    Xx,
    /// Exciton photon.
    X,
}

impl Channel {
    pub fn tag(self) -> &'static str {
        match self {
            Channel::Xx => "XX",
            Channel::X => "X",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Pass,
    Orthogonal,
}

/// Simulation truth: where a detected photon came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Dot,
    Background,
    Dark,
    Reexcite,
}

impl Origin {
    pub fn tag(self) -> &'static str {
        match self {
            Origin::Dot => "dot",
            Origin::Background => "background",
            Origin::Dark => "dark",
            Origin::Reexcite => "reexcite",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "dot" => Origin::Dot,
            "background" => Origin::Background,
            "dark" => Origin::Dark,
            "reexcite" => Origin::Reexcite,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEvent {
    pub pulse_index: u64,
    pub channel: Channel,
    /// Time since the start of the excitation pulse, in `[0, rep_period)`.
    pub time_ns: f64,
    pub setting_id: u32,
    pub outcome: Outcome,
    pub origin: Origin,
}

/// Everything needed to regenerate a run exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: SourceConfig,
    pub settings: Vec<AnalyzerSetting>,
    pub pulses_per_setting: u64,
    pub seed: u64,
}

impl RunManifest {
    pub fn new(
        config: SourceConfig,
        settings: Vec<AnalyzerSetting>,
        pulses_per_setting: u64,
        seed: u64,
    ) -> Result<Self, EventError> {
        let manifest = Self {
            config,
            settings,
            pulses_per_setting,
            seed,
        };
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<(), EventError> {
        self.config.validate()?;
        if self.pulses_per_setting == 0 {
            return Err(EventError::InvalidManifest(
                "pulses_per_setting must be positive".into(),
            ));
        }
        if self.settings.is_empty() {
            return Err(EventError::InvalidManifest("no analyzer settings".into()));
        }
        for (i, s) in self.settings.iter().enumerate() {
            s.validate()?;
            if self.settings[..i].iter().any(|o| o.id == s.id) {
                return Err(EventError::InvalidManifest(format!(
                    "duplicate setting id {}",
                    s.id
                )));
            }
            if self.settings[..i].iter().any(|o| o.label == s.label) {
                return Err(EventError::InvalidManifest(format!(
                    "duplicate setting label {:?}",
                    s.label
                )));
            }
        }
        Ok(())
    }

    pub fn setting(&self, id: u32) -> Option<&AnalyzerSetting> {
        self.settings.iter().find(|s| s.id == id)
    }

    pub fn setting_by_label(&self, label: &str) -> Option<&AnalyzerSetting> {
        self.settings.iter().find(|s| s.label == label)
    }

    /// Canonical `key = value` lines. The digest is taken over exactly these
    /// lines, and [`RunManifest::from_lines`] reads them back.
    pub fn to_lines(&self) -> Vec<String> {
        let c = &self.config;
        let mut lines = vec![
            format!("splitting_ueV = {:?}", c.splitting_uev),
            format!("tau_xx_ns = {:?}", c.tau_xx_ns),
            format!("tau_x_ns = {:?}", c.tau_x_ns),
            format!("pulse_width_ns = {:?}", c.pulse_width_ns),
            format!("rep_period_ns = {:?}", c.rep_period_ns),
            format!("background_fraction = {:?}", c.background_fraction),
            format!("tau_bg_ns = {:?}", c.tau_bg_ns),
            format!("reexcite_prob = {:?}", c.reexcite_prob),
            format!("dark_rate_hz = {:?}", c.dark_rate_hz),
            format!("detect_efficiency = {:?}", c.detect_efficiency),
            format!("emission_prob = {:?}", c.emission_prob),
            format!("pulses_per_setting = {}", self.pulses_per_setting),
            format!("seed = {}", self.seed),
        ];
        for s in &self.settings {
            lines.push(format!("setting = {s}"));
        }
        lines
    }

    pub fn from_lines<'a>(lines: impl IntoIterator<Item = &'a str>) -> Result<Self, EventError> {
        let mut config = SourceConfig::ideal();
        let mut pulses = None;
        let mut seed = None;
        let mut settings = Vec::new();
        let mut seen = Vec::new();
        for line in lines {
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| EventError::InvalidManifest(format!("not key = value: {line:?}")))?;
            let num = || {
                value.parse::<f64>().map_err(|_| {
                    EventError::InvalidManifest(format!("{key}: not a number: {value:?}"))
                })
            };
            match key {
                "splitting_ueV" => config.splitting_uev = num()?,
                "tau_xx_ns" => config.tau_xx_ns = num()?,
                "tau_x_ns" => config.tau_x_ns = num()?,
                "pulse_width_ns" => config.pulse_width_ns = num()?,
                "rep_period_ns" => config.rep_period_ns = num()?,
                "background_fraction" => config.background_fraction = num()?,
                "tau_bg_ns" => config.tau_bg_ns = num()?,
                "reexcite_prob" => config.reexcite_prob = num()?,
                "dark_rate_hz" => config.dark_rate_hz = num()?,
                "detect_efficiency" => config.detect_efficiency = num()?,
                "emission_prob" => config.emission_prob = num()?,
                "pulses_per_setting" => {
                    pulses = Some(value.parse::<u64>().map_err(|_| {
                        EventError::InvalidManifest(format!("bad pulses_per_setting {value:?}"))
                    })?)
                }
                "seed" => {
                    seed = Some(value.parse::<u64>().map_err(|_| {
                        EventError::InvalidManifest(format!("bad seed {value:?}"))
                    })?)
                }
                "setting" => {
                    let s = AnalyzerSetting::parse(settings.len() as u32, value)?;
                    settings.push(s);
                    continue;
                }
                other => {
                    return Err(EventError::InvalidManifest(format!("unknown key {other:?}")))
                }
            }
            seen.push(key.to_string());
        }
        const REQUIRED: [&str; 13] = [
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
            "pulses_per_setting",
            "seed",
        ];
        if let Some(missing) = REQUIRED.iter().find(|k| !seen.iter().any(|s| s == *k)) {
            return Err(EventError::InvalidManifest(format!("missing {missing}")));
        }
        Self::new(
            config,
            settings,
            pulses.expect("checked above"),
            seed.expect("checked above"),
        )
    }

    /// SHA-256 over the canonical lines, hex encoded.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for line in self.to_lines() {
            hasher.update(line.as_bytes());
            hasher.update(b"\n");
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}
