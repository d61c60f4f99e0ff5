//! Ready-made source configurations.

use crate::source::{GateWindows, NoiseMix, SourceConfig};

/// Pulses per setting used by the shipped run presets.
pub const DEFAULT_PULSES_PER_SETTING: u64 = 1_000_000;

/// Proportions of background, re-excitation and dark counts used for the
/// calibrated source, before the common scale is solved for.
pub const CALIBRATION_MIX: NoiseMix = NoiseMix {
    background_fraction: 0.06,
    reexcite_prob: 0.03,
    dark_rate_hz: 12_000.0,
};

/// Zero splitting, no uncorrelated light: emits `ψ⁺`.
pub fn ideal() -> SourceConfig {
    SourceConfig::ideal()
}

/// A 0.32 µeV splitting with the exciton lifetime and noise strengths
/// solved (and rounded) so that the ungated fidelity is 0.794 and
/// `S_RC = 2.15`; see [`crate::source::calibrate`] with [`CALIBRATION_MIX`].
pub fn calibrated() -> SourceConfig {
    SourceConfig {
        splitting_uev: 0.32,
        tau_xx_ns: 0.4,
        tau_x_ns: 1.1608,
        pulse_width_ns: 0.1,
        rep_period_ns: 12.5,
        background_fraction: 0.05898,
        tau_bg_ns: 0.2,
        reexcite_prob: 0.02949,
        dark_rate_hz: 11_796.0,
        detect_efficiency: 0.35,
        emission_prob: 1.0,
    }
}

/// A 1 ns biexciton window and a 1.5 ns exciton window, both opening 0.15 ns
/// into the period, after the excitation pulse and most of the background
/// transient.
pub fn calibrated_gate() -> GateWindows {
    GateWindows::new(0.65, 1.0, 0.9, 1.5).expect("positive widths")
}

/// Splitting large enough that the phase averages out: the pair is
/// classically correlated in the rectilinear basis only.
pub fn separable() -> SourceConfig {
    SourceConfig {
        splitting_uev: 50.0,
        ..SourceConfig::ideal()
    }
}

/// Emits `p·ψ⁺ + (1 − p)·I/4` at the zero-delay peak: every uncorrelated pair
/// comes from re-excitation.
pub fn werner(p: f64) -> SourceConfig {
    SourceConfig {
        reexcite_prob: 1.0 - p,
        ..SourceConfig::ideal()
    }
}

/// Background light only.
pub fn uncorrelated() -> SourceConfig {
    SourceConfig {
        background_fraction: 1.0,
        ..SourceConfig::ideal()
    }
}
