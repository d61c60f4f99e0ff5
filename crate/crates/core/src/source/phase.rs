use super::timing::cascade_integral;
use super::{GateWindows, SourceConfig, SourceError, HBAR_UEV_NS};
use crate::polarization::{TwoPhotonKet, TwoPhotonState, C64};

/// `(|H₁H₂⟩ + e^{iSτ/ħ}|V₁V₂⟩)/√2` for an exciton delay `τ`.
pub fn evolved_pure_ket(splitting_uev: f64, delay_ns: f64) -> TwoPhotonKet {
    TwoPhotonKet::with_relative_phase(splitting_uev * delay_ns / HBAR_UEV_NS)
}

pub fn evolved_pure_state(splitting_uev: f64, delay_ns: f64) -> TwoPhotonState {
    evolved_pure_ket(splitting_uev, delay_ns).density()
}

/// Cascade statistics inside a gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAverage {
    /// Probability that both photons of a cascade land in their windows
    /// (conditioned on the exciton photon arriving within the period).
    pub acceptance: f64,
    /// `⟨e^{iSτ/ħ}⟩` over accepted cascades.
    pub mean_phase: C64,
    /// Probability that the biexciton photon alone lands in its window.
    pub xx_acceptance: f64,
    /// Probability that the exciton photon alone lands in its window.
    pub x_acceptance: f64,
}

/// Averages the precession phase over the exciton delays admitted by `gate`.
///
/// Without a gate the delay is exponential over `[0, ∞)` and the result is
/// `1/(1 − iSτ_x/ħ)`, whose real part `1/(1 + (Sτ_x/ħ)²)` is the suppression
/// of the diagonal and circular correlations.
pub fn phase_average(
    config: &SourceConfig,
    gate: Option<&GateWindows>,
) -> Result<PhaseAverage, SourceError> {
    config.validate()?;
    let omega = config.precession_rate();
    let Some(gate) = gate else {
        let x = omega * config.tau_x_ns;
        return Ok(PhaseAverage {
            acceptance: 1.0,
            mean_phase: C64::new(1.0, 0.0) / C64::new(1.0, -x),
            xx_acceptance: 1.0,
            x_acceptance: 1.0,
        });
    };
    gate.validate(config.rep_period_ns)?;
    let period = (0.0, config.rep_period_ns);
    let in_period = cascade_integral(config, period, period, 0.0)?.re;
    let both = cascade_integral(config, gate.xx_range(), gate.x_range(), 0.0)?.re;
    let phased = cascade_integral(config, gate.xx_range(), gate.x_range(), omega)?;
    let xx_only = cascade_integral(config, gate.xx_range(), period, 0.0)?.re;
    let x_only = cascade_integral(config, period, gate.x_range(), 0.0)?.re;
    let mean_phase = if both > 0.0 {
        phased / both
    } else {
        C64::new(1.0, 0.0)
    };
    Ok(PhaseAverage {
        acceptance: both / in_period,
        mean_phase,
        xx_acceptance: xx_only / in_period,
        x_acceptance: x_only / in_period,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::{correlation_e, Basis, BasisPair};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_splitting_is_psi_plus() {
        for tau in [0.0, 0.3, 5.0] {
            let s = evolved_pure_state(0.0, tau);
            let psi = crate::polarization::bell_state_psi_plus();
            assert!((s.rho() - psi.rho()).iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn half_turn_flips_diagonal_sign() {
        let tau = PI * HBAR_UEV_NS / 0.32;
        assert_abs_diff_eq!(tau, 6.4619, epsilon = 1e-4);
        let s = evolved_pure_state(0.32, tau);
        assert_abs_diff_eq!(
            correlation_e(&s, &BasisPair::same(Basis::Diagonal)),
            -1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rectilinear_unaffected_by_phase() {
        for tau in [0.0, 0.77, 3.1, 12.0] {
            let s = evolved_pure_state(0.32, tau);
            assert_abs_diff_eq!(
                correlation_e(&s, &BasisPair::same(Basis::Rectilinear)),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn ungated_closed_form() {
        let mut c = SourceConfig::ideal();
        c.splitting_uev = 0.32;
        c.tau_x_ns = 1.0;
        let avg = phase_average(&c, None).unwrap();
        let x: f64 = 0.32 / HBAR_UEV_NS;
        assert_abs_diff_eq!(avg.mean_phase.re, 1.0 / (1.0 + x * x), epsilon = 1e-15);
        assert_abs_diff_eq!(avg.mean_phase.re, 0.808_83, epsilon = 1e-4);
        assert_abs_diff_eq!(avg.mean_phase.im, x / (1.0 + x * x), epsilon = 1e-15);
    }

    #[test]
    fn narrow_gate_improves_coherence() {
        let mut c = SourceConfig::ideal();
        c.splitting_uev = 0.32;
        c.tau_x_ns = 1.2;
        let gate = GateWindows::starting_at(0.15, 1.0, 1.5).unwrap();
        let gated = phase_average(&c, Some(&gate)).unwrap();
        let open = phase_average(&c, None).unwrap();
        assert!(gated.mean_phase.re > open.mean_phase.re);
        assert!(gated.acceptance > 0.0 && gated.acceptance < gated.xx_acceptance);
    }
}
