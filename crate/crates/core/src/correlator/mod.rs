//! Coincidence analysis: zero-delay `g²`, degrees of polarization correlation,
//! fidelity to `ψ⁺`, two-setting Bell parameters and the four-setting CHSH
//! value, all with Poissonian standard errors.
//!
//! A degree of correlation is the contrast between co- and cross-polarized
//! zero-delay coincidences, `C = (g_co − g_cross)/(g_co + g_cross)`, where
//! each `g²(0)` is the same-pulse count over the mean side-peak count
//! (offsets `2 ≤ |k| ≤ K`).

mod chsh;
mod gate;
mod histogram;
mod pipeline;

pub use chsh::{bell_equivalence_check, chsh, ChshResult, ChshTerm, SignConvention};
pub use gate::{centered_gate, peak_time};
pub use histogram::{build_histogram, CoincidenceHistogram, DEFAULT_MAX_OFFSET};
pub use pipeline::{analyze_bell, analyze_chsh, analyze_setting, chsh_settings};

use std::f64::consts::SQRT_2;
use std::fmt;

use thiserror::Error;

use crate::events::{Channel, EventError};
use crate::polarization::Basis;

/// Smallest side-peak offset used for normalization.
pub const SIDE_PEAK_MIN_OFFSET: usize = 2;

#[derive(Debug, Error)]
pub enum CorrelatorError {
    #[error("setting {setting_id}: no accepted {channel} events")]
    EmptyChannel { setting_id: u32, channel: Channel },
    #[error("events are not sorted by pulse index")]
    Unsorted,
    #[error("side peaks are empty; g²(0) has no normalization")]
    UndefinedNormalization,
    #[error("no zero-delay coincidences in either polarization; C is undefined")]
    UndefinedCorrelation,
    #[error("{0}")]
    Incompatible(String),
    #[error("missing settings: {}", .0.join(", "))]
    MissingSettings(Vec<String>),
    #[error("CHSH settings mismatch: {0}")]
    SettingMismatch(String),
    #[error("state is polarized (reduced-state Bloch length {magnitude:.3e})")]
    Polarized { magnitude: f64 },
    #[error(transparent)]
    Events(#[from] EventError),
    #[error(transparent)]
    Source(#[from] crate::source::SourceError),
}

/// A value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measured {
    pub value: f64,
    pub sigma: f64,
}

impl Measured {
    pub const fn new(value: f64, sigma: f64) -> Self {
        Self { value, sigma }
    }

    pub const fn exact(value: f64) -> Self {
        Self { value, sigma: 0.0 }
    }

    /// `(value − reference)/sigma`; infinite for a zero error.
    pub fn sigmas_from(&self, reference: f64) -> f64 {
        (self.value - reference) / self.sigma
    }
}

impl fmt::Display for Measured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} ± {:.4}", self.value, self.sigma)
    }
}

/// Normalized zero-delay coincidence rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G2 {
    pub value: f64,
    pub sigma: f64,
    pub zero_count: u64,
    /// Mean side-peak count, corrected for the pulses at the ends of the run
    /// that have no partner at that offset.
    pub side_mean: f64,
    pub side_total: u64,
}

/// `g²(0)` from one polarization combination of a histogram: `co` or cross
/// counts indexed from `−K` to `K`.
pub fn g2_zero(counts: &[u64], pulses: u64) -> Result<G2, CorrelatorError> {
    let k = (counts.len() - 1) / 2;
    if counts.len() % 2 == 0 || k < 10 {
        return Err(CorrelatorError::Incompatible(format!(
            "histogram with {} bins has fewer than 10 offsets per side",
            counts.len()
        )));
    }
    let mut side_total = 0u64;
    let mut side_level = 0.0;
    let mut n_side = 0usize;
    for (i, &c) in counts.iter().enumerate() {
        let off = i.abs_diff(k);
        if off < SIDE_PEAK_MIN_OFFSET {
            continue;
        }
        side_total += c;
        let overlap = pulses.saturating_sub(off as u64);
        if overlap > 0 {
            side_level += c as f64 * pulses as f64 / overlap as f64;
        }
        n_side += 1;
    }
    if side_total == 0 {
        return Err(CorrelatorError::UndefinedNormalization);
    }
    let side_mean = side_level / n_side as f64;
    let zero = counts[k];
    let value = zero as f64 / side_mean;
    let sigma = (zero as f64 / (side_mean * side_mean) + value * value / side_total as f64).sqrt();
    Ok(G2 {
        value,
        sigma,
        zero_count: zero,
        side_mean,
        side_total,
    })
}

/// Degree of correlation in one basis or setting.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult {
    pub label: String,
    pub g2_co: G2,
    pub g2_cross: G2,
    pub c: f64,
    pub sigma_c: f64,
}

impl CorrelationResult {
    pub fn measured(&self) -> Measured {
        Measured::new(self.c, self.sigma_c)
    }
}

/// `C = (g_co − g_cross)/(g_co + g_cross)` with
/// `σ_C = 2√(N_co·N_cross/(N_co + N_cross)³)` from the zero-delay counts.
pub fn degree_of_correlation(
    label: impl Into<String>,
    g2_co: G2,
    g2_cross: G2,
) -> Result<CorrelationResult, CorrelatorError> {
    let sum = g2_co.value + g2_cross.value;
    if !(sum > 0.0) {
        return Err(CorrelatorError::UndefinedCorrelation);
    }
    let (nc, nx) = (g2_co.zero_count as f64, g2_cross.zero_count as f64);
    Ok(CorrelationResult {
        label: label.into(),
        g2_co,
        g2_cross,
        c: (g2_co.value - g2_cross.value) / sum,
        sigma_c: 2.0 * (nc * nx / (nc + nx).powi(3)).sqrt(),
    })
}

/// Correlation directly from a histogram's zero and side peaks.
pub fn correlation_from_histogram(
    label: impl Into<String>,
    hist: &CoincidenceHistogram,
) -> Result<CorrelationResult, CorrelatorError> {
    degree_of_correlation(
        label,
        g2_zero(hist.co_counts(), hist.pulses)?,
        g2_zero(hist.cross_counts(), hist.pulses)?,
    )
}

/// `(1 + C_rect + C_diag − C_circ)/4`.
pub fn fidelity(c_rect: Measured, c_diag: Measured, c_circ: Measured) -> Measured {
    Measured::new(
        (1.0 + c_rect.value + c_diag.value - c_circ.value) / 4.0,
        quadrature(&[c_rect.sigma, c_diag.sigma, c_circ.sigma]) / 4.0,
    )
}

/// Pairs of Poincaré-sphere planes probed by a two-setting Bell parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellPlane {
    /// `√2(C_rect − C_circ)`.
    RC,
    /// `√2(C_diag − C_circ)`.
    DC,
    /// `√2(C_rect + C_diag)`.
    RD,
}

pub fn bell_two_setting(c_a: Measured, c_b: Measured, plane: BellPlane) -> Measured {
    let value = match plane {
        BellPlane::RC | BellPlane::DC => SQRT_2 * (c_a.value - c_b.value),
        BellPlane::RD => SQRT_2 * (c_a.value + c_b.value),
    };
    Measured::new(value, SQRT_2 * quadrature(&[c_a.sigma, c_b.sigma]))
}

fn quadrature(sigmas: &[f64]) -> f64 {
    sigmas.iter().map(|s| s * s).sum::<f64>().sqrt()
}

/// The three degrees of correlation and everything derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellResult {
    pub c_rect: Measured,
    pub c_diag: Measured,
    pub c_circ: Measured,
    pub fidelity: Measured,
    pub s_rc: Measured,
    pub s_dc: Measured,
    pub s_rd: Measured,
    pub gated: bool,
}

impl BellResult {
    pub fn from_correlations(c_rect: Measured, c_diag: Measured, c_circ: Measured, gated: bool) -> Self {
        Self {
            c_rect,
            c_diag,
            c_circ,
            fidelity: fidelity(c_rect, c_diag, c_circ),
            s_rc: bell_two_setting(c_rect, c_circ, BellPlane::RC),
            s_dc: bell_two_setting(c_diag, c_circ, BellPlane::DC),
            s_rd: bell_two_setting(c_rect, c_diag, BellPlane::RD),
            gated,
        }
    }

    /// Noise-free values from `[C_rect, C_diag, C_circ]`.
    pub fn exact(c: [f64; 3]) -> Self {
        Self::from_correlations(Measured::exact(c[0]), Measured::exact(c[1]), Measured::exact(c[2]), false)
    }

    pub fn correlation(&self, basis: Basis) -> Measured {
        match basis {
            Basis::Rectilinear => self.c_rect,
            Basis::Diagonal => self.c_diag,
            Basis::Circular => self.c_circ,
        }
    }
}
