//! Emitter model: fine-structure phase precession and the uncorrelated-light
//! budget, with time-averaged (optionally gated) predictions.
//!
//! The cascade emits its biexciton photon at `t_xx = U + Exp(τ_xx)` after the
//! start of each excitation pulse (`U` uniform over the pulse width) and its
//! exciton photon after a further `Exp(τ_x)` delay `τ`. During that delay the
//! two exciton eigenstates, split by `S`, accumulate a relative phase, so the
//! emitted pair is `(|H₁H₂⟩ + e^{iSτ/ħ}|V₁V₂⟩)/√2`.
//!
//! Uncorrelated light enters the zero-delay coincidence peak through three
//! mechanisms:
//!
//! * wetting-layer background: unpolarized photons in each channel at
//!   `U + Exp(τ_bg)`; `background_fraction` of the collected photons;
//! * re-excitation: with probability `reexcite_prob` a cascade's biexciton
//!   photon is replaced by an unpolarized photon emitted during the pulse, so
//!   the pair it forms with the exciton photon carries no correlation;
//! * dark counts: uniform in time at `dark_rate_hz` per channel.
//!
//! The effective state seen by a zero-delay correlation measurement is
//! `ρ = (1 − b)·⟨ρ(τ)⟩ + b·I/4`, where `b` is the expected fraction of
//! zero-delay coincidences that are accidental (see [`NoiseBudget`]).

mod calibrate;
mod noise;
mod phase;
mod timing;

pub use calibrate::{calibrate, CalibrationTarget, NoiseMix, REFERENCE_UNGATED_TARGET};
pub use noise::{noise_budget, uncorrelated_fraction, NoiseBudget};
pub use phase::{evolved_pure_ket, evolved_pure_state, phase_average, PhaseAverage};
pub use timing::{shifted_exponential_cdf, window_overlap};

use nalgebra::Matrix4;
use thiserror::Error;

use crate::polarization::{correlation_e, Basis, BasisPair, TwoPhotonState, C64};

/// Reduced Planck constant in µeV·ns.
pub const HBAR_UEV_NS: f64 = 0.6582119;

/// Absolute tolerance for the phase-averaging quadrature.
pub const INTEGRATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SourceError {
    #[error("invalid {field} = {value}: {reason}")]
    InvalidConfig {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("{what} did not converge (error estimate {error_estimate:.3e})")]
    NonConvergent {
        what: &'static str,
        error_estimate: f64,
    },
    #[error("calibration failed: {0}")]
    Calibration(String),
}

/// Physical parameters of the emitter and detection system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceConfig {
    /// Fine-structure splitting `S` (µeV).
    pub splitting_uev: f64,
    /// Biexciton radiative lifetime (ns).
    pub tau_xx_ns: f64,
    /// Exciton radiative lifetime (ns).
    pub tau_x_ns: f64,
    /// Width of the rectangular excitation pulse (ns).
    pub pulse_width_ns: f64,
    /// Laser repetition period (ns).
    pub rep_period_ns: f64,
    /// Fraction of collected photons, per channel, from the wetting layer.
    pub background_fraction: f64,
    /// Lifetime of the background transient (ns).
    pub tau_bg_ns: f64,
    /// Probability that a cascade's biexciton photon comes from a re-excited
    /// dot and is uncorrelated with the exciton photon.
    pub reexcite_prob: f64,
    /// Dark-count rate of one channel's detection arm, spread evenly over its
    /// two outcome ports (Hz).
    pub dark_rate_hz: f64,
    /// Probability that an emitted photon is detected.
    pub detect_efficiency: f64,
    /// Probability that a pulse excites the emitter at all (dot cascade or
    /// background emission).
    pub emission_prob: f64,
}

impl SourceConfig {
    pub fn validate(&self) -> Result<(), SourceError> {
        let check = |field, value: f64, ok: bool, reason| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(SourceError::InvalidConfig {
                    field,
                    value,
                    reason,
                })
            }
        };
        check("splitting_ueV", self.splitting_uev, self.splitting_uev >= 0.0, "must be ≥ 0")?;
        check("tau_xx_ns", self.tau_xx_ns, self.tau_xx_ns > 0.0, "must be > 0")?;
        check("tau_x_ns", self.tau_x_ns, self.tau_x_ns > 0.0, "must be > 0")?;
        check(
            "pulse_width_ns",
            self.pulse_width_ns,
            self.pulse_width_ns >= 0.0,
            "must be ≥ 0",
        )?;
        check(
            "rep_period_ns",
            self.rep_period_ns,
            self.rep_period_ns > self.tau_xx_ns && self.rep_period_ns > self.pulse_width_ns,
            "must exceed tau_xx_ns and pulse_width_ns",
        )?;
        check(
            "background_fraction",
            self.background_fraction,
            (0.0..=1.0).contains(&self.background_fraction),
            "must lie in [0, 1]",
        )?;
        check("tau_bg_ns", self.tau_bg_ns, self.tau_bg_ns > 0.0, "must be > 0")?;
        check(
            "reexcite_prob",
            self.reexcite_prob,
            (0.0..=1.0).contains(&self.reexcite_prob),
            "must lie in [0, 1]",
        )?;
        check("dark_rate_hz", self.dark_rate_hz, self.dark_rate_hz >= 0.0, "must be ≥ 0")?;
        check(
            "detect_efficiency",
            self.detect_efficiency,
            self.detect_efficiency > 0.0 && self.detect_efficiency <= 1.0,
            "must lie in (0, 1]",
        )?;
        check(
            "emission_prob",
            self.emission_prob,
            (0.0..=1.0).contains(&self.emission_prob),
            "must lie in [0, 1]",
        )?;
        Ok(())
    }

    /// Zero splitting, no uncorrelated light.
    pub fn ideal() -> Self {
        Self {
            splitting_uev: 0.0,
            tau_xx_ns: 0.4,
            tau_x_ns: 0.8,
            pulse_width_ns: 0.1,
            rep_period_ns: 12.5,
            background_fraction: 0.0,
            tau_bg_ns: 0.2,
            reexcite_prob: 0.0,
            dark_rate_hz: 0.0,
            detect_efficiency: 0.35,
            emission_prob: 1.0,
        }
    }

    /// Precession rate of the exciton phase, rad/ns.
    pub fn precession_rate(&self) -> f64 {
        self.splitting_uev / HBAR_UEV_NS
    }

    /// Probability per pulse that a full cascade is emitted.
    pub fn cascade_prob(&self) -> f64 {
        self.emission_prob * (1.0 - self.background_fraction)
    }

    /// Mean number of background photons emitted per pulse into each channel.
    pub fn background_mean(&self) -> f64 {
        self.emission_prob * self.background_fraction
    }

    /// Mean number of dark counts per channel per repetition period.
    pub fn dark_mean_per_period(&self) -> f64 {
        self.dark_rate_hz * self.rep_period_ns * 1e-9
    }
}

/// Temporal acceptance windows, one per channel, inside a repetition period.
/// A time `t` is accepted when `center − width/2 ≤ t < center + width/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateWindows {
    pub xx_center_ns: f64,
    pub xx_width_ns: f64,
    pub x_center_ns: f64,
    pub x_width_ns: f64,
}

impl GateWindows {
    pub fn new(
        xx_center_ns: f64,
        xx_width_ns: f64,
        x_center_ns: f64,
        x_width_ns: f64,
    ) -> Result<Self, SourceError> {
        let gate = Self {
            xx_center_ns,
            xx_width_ns,
            x_center_ns,
            x_width_ns,
        };
        if !(xx_width_ns > 0.0 && x_width_ns > 0.0) {
            return Err(SourceError::InvalidGate(format!(
                "widths must be positive (xx {xx_width_ns}, x {x_width_ns})"
            )));
        }
        Ok(gate)
    }

    /// Windows with their lower edges at `start_ns`.
    pub fn starting_at(start_ns: f64, xx_width_ns: f64, x_width_ns: f64) -> Result<Self, SourceError> {
        Self::new(
            start_ns + xx_width_ns / 2.0,
            xx_width_ns,
            start_ns + x_width_ns / 2.0,
            x_width_ns,
        )
    }

    pub fn xx_range(&self) -> (f64, f64) {
        (
            self.xx_center_ns - self.xx_width_ns / 2.0,
            self.xx_center_ns + self.xx_width_ns / 2.0,
        )
    }

    pub fn x_range(&self) -> (f64, f64) {
        (
            self.x_center_ns - self.x_width_ns / 2.0,
            self.x_center_ns + self.x_width_ns / 2.0,
        )
    }

    pub fn accepts_xx(&self, t: f64) -> bool {
        let (lo, hi) = self.xx_range();
        t >= lo && t < hi
    }

    pub fn accepts_x(&self, t: f64) -> bool {
        let (lo, hi) = self.x_range();
        t >= lo && t < hi
    }

    /// Both windows must lie inside `[0, period]`.
    pub fn validate(&self, period_ns: f64) -> Result<(), SourceError> {
        for (name, (lo, hi)) in [("xx", self.xx_range()), ("x", self.x_range())] {
            if lo < -1e-12 || hi > period_ns + 1e-12 {
                return Err(SourceError::InvalidGate(format!(
                    "{name} window [{lo}, {hi}) does not fit in a {period_ns} ns period"
                )));
            }
        }
        Ok(())
    }

    /// Window of `width` centred on `peak`, shifted as little as needed to fit
    /// inside the period.
    pub fn clamp_center(peak_ns: f64, width_ns: f64, period_ns: f64) -> f64 {
        let half = width_ns / 2.0;
        peak_ns.clamp(half, (period_ns - half).max(half))
    }
}

/// `(1 − b)·⟨ρ(τ)⟩ + b·I/4`, with `⟨ρ(τ)⟩` averaged over the exciton delays
/// admitted by `gate` and `b` from [`uncorrelated_fraction`].
pub fn time_averaged_state(
    config: &SourceConfig,
    gate: Option<&GateWindows>,
) -> Result<TwoPhotonState, SourceError> {
    config.validate()?;
    let average = phase_average(config, gate)?;
    let b = uncorrelated_fraction(config, gate)?;
    Ok(dephased_state(average.mean_phase).mix(&TwoPhotonState::maximally_mixed(), b))
}

/// `(|HH⟩⟨HH| + |VV⟩⟨VV| + w|VV⟩⟨HH| + w*|HH⟩⟨VV|)/2` for a mean phase
/// factor `w = ⟨e^{iφ}⟩`, `|w| ≤ 1`.
pub fn dephased_state(mean_phase: C64) -> TwoPhotonState {
    let half = C64::new(0.5, 0.0);
    let mut rho = Matrix4::<C64>::zeros();
    rho[(0, 0)] = half;
    rho[(3, 3)] = half;
    rho[(3, 0)] = mean_phase * 0.5;
    rho[(0, 3)] = mean_phase.conj() * 0.5;
    TwoPhotonState::new(rho).expect("|w| ≤ 1 keeps the dephased state physical")
}

/// Predicted degrees of correlation `(C_rect, C_diag, C_circ)`.
pub fn predicted_correlations(
    config: &SourceConfig,
    gate: Option<&GateWindows>,
) -> Result<[f64; 3], SourceError> {
    let rho = time_averaged_state(config, gate)?;
    Ok(Basis::ALL.map(|b| correlation_e(&rho, &BasisPair::same(b))))
}
