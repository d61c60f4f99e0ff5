use super::noise::uncorrelated_fraction;
use super::{SourceConfig, SourceError, HBAR_UEV_NS};

/// Ungated figures a calibrated source should reproduce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationTarget {
    /// Fidelity to `ψ⁺`, `(1 + C_rect + C_diag − C_circ)/4`.
    pub fidelity: f64,
    /// `√2·(C_rect − C_circ)`.
    pub bell_rc: f64,
}

/// Fidelity 0.794 and rectilinear/circular Bell parameter 2.15 without gating.
pub const REFERENCE_UNGATED_TARGET: CalibrationTarget = CalibrationTarget {
    fidelity: 0.794,
    bell_rc: 2.15,
};

/// Relative weights of the three noise mechanisms. [`calibrate`] scales all
/// three by one common factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMix {
    pub background_fraction: f64,
    pub reexcite_prob: f64,
    pub dark_rate_hz: f64,
}

impl NoiseMix {
    fn apply(&self, base: &SourceConfig, scale: f64) -> SourceConfig {
        SourceConfig {
            background_fraction: self.background_fraction * scale,
            reexcite_prob: self.reexcite_prob * scale,
            dark_rate_hz: self.dark_rate_hz * scale,
            ..*base
        }
    }

    fn max_scale(&self) -> f64 {
        let mut limit = f64::INFINITY;
        for w in [self.background_fraction, self.reexcite_prob] {
            if w > 0.0 {
                limit = limit.min(1.0 / w);
            }
        }
        limit
    }
}

impl CalibrationTarget {
    /// Ungated `(1 − b, ⟨cos φ⟩)` that give this target, using
    /// `C_rect = 1 − b` and `C_diag = −C_circ = (1 − b)⟨cos φ⟩`.
    pub fn contrast_and_coherence(&self) -> Result<(f64, f64), SourceError> {
        let u = 4.0 * self.fidelity - 1.0;
        let v = self.bell_rc / std::f64::consts::SQRT_2;
        let contrast = 2.0 * v - u;
        let coherence = (u - v) / contrast;
        if !(contrast > 0.0 && contrast <= 1.0 && coherence > 0.0 && coherence <= 1.0) {
            return Err(SourceError::Calibration(format!(
                "target (f = {}, S_RC = {}) needs contrast {contrast:.4} and coherence \
                 {coherence:.4}, both of which must lie in (0, 1]",
                self.fidelity, self.bell_rc
            )));
        }
        Ok((contrast, coherence))
    }
}

/// Returns `base` with `tau_x_ns` and the noise strengths adjusted so that the
/// ungated fidelity and `S_RC` hit `target`. The splitting, pulse and
/// detection parameters of `base` are kept; the noise mechanisms keep the
/// proportions given by `mix`.
pub fn calibrate(
    base: &SourceConfig,
    mix: &NoiseMix,
    target: &CalibrationTarget,
) -> Result<SourceConfig, SourceError> {
    base.validate()?;
    let (contrast, coherence) = target.contrast_and_coherence()?;
    let mut tuned = *base;
    if coherence < 1.0 {
        if base.splitting_uev <= 0.0 {
            return Err(SourceError::Calibration(
                "partial coherence needs a nonzero splitting".into(),
            ));
        }
        tuned.tau_x_ns = HBAR_UEV_NS * (1.0 / coherence - 1.0).sqrt() / base.splitting_uev;
    }

    let wanted = 1.0 - contrast;
    let fraction = |k: f64| uncorrelated_fraction(&mix.apply(&tuned, k), None);
    if wanted <= 0.0 {
        return Ok(mix.apply(&tuned, 0.0));
    }
    let mut hi = mix.max_scale().min(1.0e6);
    if !hi.is_finite() || hi <= 0.0 || fraction(hi)? < wanted {
        return Err(SourceError::Calibration(format!(
            "noise mix cannot reach an uncorrelated fraction of {wanted:.4}"
        )));
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fraction(mid)? < wanted {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(mix.apply(&tuned, 0.5 * (lo + hi)))
}
