use std::fmt;

use super::EventError;
use crate::polarization::{BasisPair, JonesOperator, PolarizationVector, Retarder};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalElement {
    HalfWave(f64),
    QuarterWave(f64),
    Polarizer(f64),
}

impl OpticalElement {
    pub fn operator(&self) -> JonesOperator {
        match *self {
            OpticalElement::HalfWave(a) => JonesOperator::waveplate(Retarder::Half, a),
            OpticalElement::QuarterWave(a) => JonesOperator::waveplate(Retarder::Quarter, a),
            OpticalElement::Polarizer(a) => JonesOperator::polarizer(a),
        }
    }

    fn parse(text: &str) -> Option<Self> {
        let mut parts = text.split_whitespace();
        let kind = parts.next()?;
        let angle: f64 = parts.next()?.parse().ok()?;
        if parts.next().is_some() || !angle.is_finite() {
            return None;
        }
        match kind {
            "hwp" => Some(OpticalElement::HalfWave(angle)),
            "qwp" => Some(OpticalElement::QuarterWave(angle)),
            "pol" => Some(OpticalElement::Polarizer(angle)),
            _ => None,
        }
    }
}

impl fmt::Display for OpticalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpticalElement::HalfWave(a) => write!(f, "hwp {a}"),
            OpticalElement::QuarterWave(a) => write!(f, "qwp {a}"),
            OpticalElement::Polarizer(a) => write!(f, "pol {a}"),
        }
    }
}

/// Optics in front of one channel's detectors, in the order light meets them.
/// The last element is the only polarizer; its transmitted output is
/// [`Outcome::Pass`](super::Outcome::Pass) and its rejected output
/// [`Outcome::Orthogonal`](super::Outcome::Orthogonal).
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzerChain {
    elements: Vec<OpticalElement>,
}

impl AnalyzerChain {
    pub fn new(elements: Vec<OpticalElement>) -> Result<Self, String> {
        let polarizers = elements
            .iter()
            .filter(|e| matches!(e, OpticalElement::Polarizer(_)))
            .count();
        match elements.last() {
            Some(OpticalElement::Polarizer(_)) if polarizers == 1 => Ok(Self { elements }),
            _ => Err(format!(
                "chain must contain exactly one polarizer, as its last element (got {})",
                display_chain(&elements)
            )),
        }
    }

    pub fn polarizer(angle_deg: f64) -> Self {
        Self {
            elements: vec![OpticalElement::Polarizer(angle_deg)],
        }
    }

    pub fn half_wave(hwp_deg: f64) -> Self {
        Self {
            elements: vec![OpticalElement::HalfWave(hwp_deg), OpticalElement::Polarizer(0.0)],
        }
    }

    pub fn quarter_wave(qwp_deg: f64) -> Self {
        Self {
            elements: vec![
                OpticalElement::QuarterWave(qwp_deg),
                OpticalElement::Polarizer(0.0),
            ],
        }
    }

    /// Parses `"hwp 22.5, pol 0"`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let elements = text
            .split(',')
            .map(|e| {
                OpticalElement::parse(e.trim())
                    .ok_or_else(|| format!("bad optical element {:?}", e.trim()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(elements)
    }

    pub fn elements(&self) -> &[OpticalElement] {
        &self.elements
    }

    /// `(J, e)`: the optics before the polarizer and the polarizer pass axis.
    fn split(&self) -> (JonesOperator, PolarizationVector) {
        let (last, optics) = self.elements.split_last().expect("validated non-empty");
        let OpticalElement::Polarizer(angle) = *last else {
            unreachable!("validated: last element is the polarizer")
        };
        let j = optics
            .iter()
            .fold(JonesOperator::identity(), |acc, e| acc.then(&e.operator()));
        (j, PolarizationVector::linear(angle))
    }

    /// Single-photon state that leaves through the pass port with certainty.
    pub fn analyzed_state(&self) -> PolarizationVector {
        let (j, e) = self.split();
        BasisPair::from_chains(&j, &e, &j, &e)
            .expect("unitary optics keep the pass axis nonzero")
            .first(crate::polarization::Port::Pass)
            .to_owned()
    }
}

fn display_chain(elements: &[OpticalElement]) -> String {
    elements
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for AnalyzerChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_chain(&self.elements))
    }
}

/// One measurement configuration: analyzer chains for both channels.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzerSetting {
    pub id: u32,
    pub label: String,
    pub xx: AnalyzerChain,
    pub x: AnalyzerChain,
}

impl AnalyzerSetting {
    pub fn new(id: u32, label: impl Into<String>, xx: AnalyzerChain, x: AnalyzerChain) -> Self {
        Self {
            id,
            label: label.into(),
            xx,
            x,
        }
    }

    pub fn rectilinear(id: u32) -> Self {
        Self::new(id, "rectilinear", AnalyzerChain::polarizer(0.0), AnalyzerChain::polarizer(0.0))
    }

    /// Half-wave plates at 22.5° ahead of vertical polarizers.
    pub fn diagonal(id: u32) -> Self {
        Self::new(id, "diagonal", AnalyzerChain::half_wave(22.5), AnalyzerChain::half_wave(22.5))
    }

    /// Quarter-wave plates at 45° ahead of vertical polarizers.
    pub fn circular(id: u32) -> Self {
        Self::new(id, "circular", AnalyzerChain::quarter_wave(45.0), AnalyzerChain::quarter_wave(45.0))
    }

    /// Half-wave plate angles `xx_hwp_deg` and `x_hwp_deg` ahead of vertical
    /// polarizers, labelled `chsh-xx<a>-x<b>`.
    pub fn chsh(id: u32, xx_hwp_deg: f64, x_hwp_deg: f64) -> Self {
        Self::new(
            id,
            format!("chsh-xx{xx_hwp_deg}-x{x_hwp_deg}"),
            AnalyzerChain::half_wave(xx_hwp_deg),
            AnalyzerChain::half_wave(x_hwp_deg),
        )
    }

    /// Rectilinear, diagonal and circular, with ids 0, 1, 2.
    pub fn standard_bases() -> Vec<Self> {
        vec![Self::rectilinear(0), Self::diagonal(1), Self::circular(2)]
    }

    /// The four permutations of biexciton plates at 11.25°/33.75° and exciton
    /// plates at 0°/22.5°, with ids starting at `first_id`.
    pub fn chsh_set(first_id: u32) -> Vec<Self> {
        let mut out = Vec::with_capacity(4);
        for x in [0.0, 22.5] {
            for xx in [11.25, 33.75] {
                out.push(Self::chsh(first_id + out.len() as u32, xx, x));
            }
        }
        out
    }

    pub fn basis_pair(&self) -> BasisPair {
        BasisPair::new(self.xx.analyzed_state(), self.x.analyzed_state())
    }

    /// Half-wave plate angles `(xx, x)` if both chains are a single half-wave
    /// plate ahead of a vertical polarizer.
    pub fn half_wave_angles(&self) -> Option<(f64, f64)> {
        let plate = |c: &AnalyzerChain| match c.elements() {
            [OpticalElement::HalfWave(a), OpticalElement::Polarizer(p)] if *p == 0.0 => Some(*a),
            _ => None,
        };
        Some((plate(&self.xx)?, plate(&self.x)?))
    }

    pub(super) fn validate(&self) -> Result<(), EventError> {
        let bad = |reason: String| EventError::InvalidSetting {
            label: self.label.clone(),
            reason,
        };
        if self.label.is_empty() || self.label.contains(['|', '\n', ',']) {
            return Err(bad("label must be non-empty without '|', ',' or newlines".into()));
        }
        AnalyzerChain::new(self.xx.elements.clone()).map_err(|e| bad(format!("xx: {e}")))?;
        AnalyzerChain::new(self.x.elements.clone()).map_err(|e| bad(format!("x: {e}")))?;
        Ok(())
    }

    /// Parses `label | xx: <chain> | x: <chain>`.
    pub fn parse(id: u32, text: &str) -> Result<Self, EventError> {
        let bad = |reason: String| EventError::InvalidSetting {
            label: text.trim().to_string(),
            reason,
        };
        let parts: Vec<&str> = text.split('|').map(str::trim).collect();
        let [label, xx, x] = parts[..] else {
            return Err(bad("expected `label | xx: <chain> | x: <chain>`".into()));
        };
        let xx = xx
            .strip_prefix("xx:")
            .ok_or_else(|| bad("second field must start with `xx:`".into()))?;
        let x = x
            .strip_prefix("x:")
            .ok_or_else(|| bad("third field must start with `x:`".into()))?;
        let setting = Self::new(
            id,
            label,
            AnalyzerChain::parse(xx.trim()).map_err(|e| bad(format!("xx: {e}")))?,
            AnalyzerChain::parse(x.trim()).map_err(|e| bad(format!("x: {e}")))?,
        );
        setting.validate()?;
        Ok(setting)
    }
}

impl fmt::Display for AnalyzerSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | xx: {} | x: {}", self.label, self.xx, self.x)
    }
}
