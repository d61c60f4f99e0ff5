use super::phase::phase_average;
use super::timing::{shifted_exponential_cdf, window_overlap, window_prob};
use super::{GateWindows, SourceConfig, SourceError};

/// Expected detections per pulse, split by origin, for the zero-delay
/// coincidence peak of one analyzer setting (all four outcome combinations
/// together).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBudget {
    /// Pairs from one cascade with both photons accepted.
    pub correlated: f64,
    /// Pairs of a re-excitation photon with its cascade's exciton photon.
    pub reexcited: f64,
    /// Accidental pairs involving at least one background or dark count.
    pub accidental: f64,
    /// Accepted singles in the biexciton channel.
    pub singles_xx: f64,
    /// Accepted singles in the exciton channel.
    pub singles_x: f64,
}

impl NoiseBudget {
    /// Fraction `b` of zero-delay coincidences that carry no polarization
    /// correlation. With no coincidences at all the result is `1`.
    pub fn fraction(&self) -> f64 {
        let uncorrelated = self.reexcited + self.accidental;
        let total = self.correlated + uncorrelated;
        if total > 0.0 {
            uncorrelated / total
        } else {
            1.0
        }
    }
}

/// Window acceptance of the background transient, conditioned on it falling
/// inside the period.
fn background_acceptance(config: &SourceConfig, window: (f64, f64)) -> f64 {
    let (pw, tau, period) = (config.pulse_width_ns, config.tau_bg_ns, config.rep_period_ns);
    window_prob(pw, tau, window.0.max(0.0), window.1.min(period))
        / shifted_exponential_cdf(pw, tau, period)
}

/// Acceptance of a re-excitation photon, uniform over the pulse.
fn pulse_acceptance(config: &SourceConfig, window: (f64, f64)) -> f64 {
    let pw = config.pulse_width_ns;
    if pw > 0.0 {
        window_overlap(window, (0.0, pw)) / pw
    } else if window.0 <= 0.0 && 0.0 < window.1 {
        1.0
    } else {
        0.0
    }
}

pub fn noise_budget(
    config: &SourceConfig,
    gate: Option<&GateWindows>,
) -> Result<NoiseBudget, SourceError> {
    config.validate()?;
    let p = config.cascade_prob();
    let r = config.reexcite_prob;
    let eta = config.detect_efficiency;
    let q = config.background_mean();
    let dark = config.dark_mean_per_period();

    let (a_c, f_xx, f_x, f_u, b_xx, b_x, d_xx, d_x) = match gate {
        None => (1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
        Some(g) => {
            let avg = phase_average(config, Some(g))?;
            let period = config.rep_period_ns;
            let clip = |w: (f64, f64)| window_overlap(w, (0.0, period)) / period;
            (
                avg.acceptance,
                avg.xx_acceptance,
                avg.x_acceptance,
                pulse_acceptance(config, g.xx_range()),
                background_acceptance(config, g.xx_range()),
                background_acceptance(config, g.x_range()),
                clip(g.xx_range()),
                clip(g.x_range()),
            )
        }
    };

    let signal_xx = p * eta * ((1.0 - r) * f_xx + r * f_u);
    let signal_x = p * eta * f_x;
    let noise_xx = q * eta * b_xx + dark * d_xx;
    let noise_x = q * eta * b_x + dark * d_x;

    Ok(NoiseBudget {
        correlated: p * (1.0 - r) * eta * eta * a_c,
        reexcited: p * r * eta * eta * f_u * f_x,
        accidental: signal_xx * noise_x + noise_xx * signal_x + noise_xx * noise_x,
        singles_xx: signal_xx + noise_xx,
        singles_x: signal_x + noise_x,
    })
}

/// Shorthand for `noise_budget(..)?.fraction()`.
pub fn uncorrelated_fraction(
    config: &SourceConfig,
    gate: Option<&GateWindows>,
) -> Result<f64, SourceError> {
    Ok(noise_budget(config, gate)?.fraction())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn clean_source_has_no_uncorrelated_light() {
        let b = noise_budget(&SourceConfig::ideal(), None).unwrap();
        assert_eq!(b.fraction(), 0.0);
        assert_abs_diff_eq!(b.correlated, 0.35 * 0.35, epsilon = 1e-15);
    }

    #[test]
    fn reexcitation_alone() {
        let mut c = SourceConfig::ideal();
        c.reexcite_prob = 0.2;
        assert_abs_diff_eq!(uncorrelated_fraction(&c, None).unwrap(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn ungated_background_hand_count() {
        let mut c = SourceConfig::ideal();
        c.background_fraction = 0.1;
        c.detect_efficiency = 0.5;
        // p = 0.9, q = 0.1, η = 0.5
        let (s, n) = (0.45, 0.05);
        let expected = (2.0 * s * n + n * n) / (0.9 * 0.25 + 2.0 * s * n + n * n);
        assert_abs_diff_eq!(uncorrelated_fraction(&c, None).unwrap(), expected, epsilon = 1e-15);
    }

    #[test]
    fn nothing_emitted_is_all_noise() {
        let mut c = SourceConfig::ideal();
        c.emission_prob = 0.0;
        assert_eq!(uncorrelated_fraction(&c, None).unwrap(), 1.0);
        c.background_fraction = 1.0;
        c.emission_prob = 1.0;
        assert_eq!(uncorrelated_fraction(&c, None).unwrap(), 1.0);
    }

    #[test]
    fn gate_rejects_dark_counts() {
        let mut c = SourceConfig::ideal();
        c.dark_rate_hz = 5.0e6;
        let gate = GateWindows::starting_at(0.0, 1.5, 2.5).unwrap();
        let open = uncorrelated_fraction(&c, None).unwrap();
        let gated = uncorrelated_fraction(&c, Some(&gate)).unwrap();
        assert!(gated < open, "gated {gated} open {open}");
    }

    #[test]
    fn monotone_in_each_mechanism() {
        let base = SourceConfig::ideal();
        let mut last = [0.0; 3];
        for k in 1..=10 {
            let x = k as f64 * 0.05;
            let mut c = [base; 3];
            c[0].background_fraction = x;
            c[1].reexcite_prob = x;
            c[2].dark_rate_hz = x * 1.0e7;
            for (i, ci) in c.iter().enumerate() {
                let b = uncorrelated_fraction(ci, None).unwrap();
                assert!(b > last[i]);
                last[i] = b;
            }
        }
    }
}
