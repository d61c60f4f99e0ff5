//! Arrival-time distributions and window integrals.

use super::{SourceConfig, SourceError, INTEGRATION_TOL};
use crate::polarization::C64;

/// CDF of `U(0, width) + Exp(tau)` at `t`.
pub fn shifted_exponential_cdf(width: f64, tau: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if width <= 0.0 {
        return -(-t / tau).exp_m1();
    }
    if t < width {
        (t + tau * (-t / tau).exp_m1()) / width
    } else {
        1.0 - tau * ((-(t - width) / tau).exp() - (-t / tau).exp()) / width
    }
}

/// Density of `U(0, width) + Exp(tau)` at `t`.
pub(crate) fn shifted_exponential_pdf(width: f64, tau: f64, t: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    if width <= 0.0 {
        return (-t / tau).exp() / tau;
    }
    if t < width {
        -(-t / tau).exp_m1() / width
    } else {
        ((-(t - width) / tau).exp() - (-t / tau).exp()) / width
    }
}

/// Probability that `U(0, width) + Exp(tau)` falls in `[lo, hi)`.
pub(crate) fn window_prob(width: f64, tau: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    shifted_exponential_cdf(width, tau, hi) - shifted_exponential_cdf(width, tau, lo)
}

/// Length of `[a0, a1) ∩ [b0, b1)`.
pub fn window_overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

/// `E[1{t_xx ∈ xx_win} · 1{t_x ∈ x_win} · e^{iωτ}]` over the unconditioned
/// cascade timing, `τ = t_x − t_xx`. The inner integral over `τ` is closed
/// form; the outer one over `t_xx` is done numerically between the kinks of
/// the integrand.
pub(crate) fn cascade_integral(
    config: &SourceConfig,
    xx_win: (f64, f64),
    x_win: (f64, f64),
    omega: f64,
) -> Result<C64, SourceError> {
    let (h0, h1) = (xx_win.0.max(0.0), xx_win.1);
    let (g0, g1) = x_win;
    // The exciton photon follows the biexciton one, so t_xx < g1 is required.
    let upper = h1.min(g1);
    if upper <= h0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let tau_x = config.tau_x_ns;
    let k = C64::new(-1.0 / tau_x, omega);
    let inner = move |t: f64| -> C64 {
        let a = (g0.max(t)) - t;
        let b = g1 - t;
        if b <= a {
            return C64::new(0.0, 0.0);
        }
        ((k * b).exp() - (k * a).exp()) / (k * tau_x)
    };
    let density = |t: f64| shifted_exponential_pdf(config.pulse_width_ns, config.tau_xx_ns, t);

    let mut cuts = vec![h0, upper];
    for p in [config.pulse_width_ns, g0] {
        if p > h0 && p < upper {
            cuts.push(p);
        }
    }
    cuts.sort_by(f64::total_cmp);

    let mut total = C64::new(0.0, 0.0);
    let pieces = (cuts.len() - 1) as f64;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= 0.0 {
            continue;
        }
        let tol = INTEGRATION_TOL / (2.0 * pieces);
        let re = quadrature::integrate(|t| density(t) * inner(t).re, a, b, tol);
        let im = quadrature::integrate(|t| density(t) * inner(t).im, a, b, tol);
        let err = re.error_estimate.max(im.error_estimate);
        if !(err <= tol) || !re.integral.is_finite() || !im.integral.is_finite() {
            return Err(SourceError::NonConvergent {
                what: "phase-averaging integral",
                error_estimate: err,
            });
        }
        total += C64::new(re.integral, im.integral);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cdf_limits_and_density() {
        for width in [0.0, 0.1, 0.5] {
            assert_eq!(shifted_exponential_cdf(width, 0.4, -1.0), 0.0);
            assert_abs_diff_eq!(shifted_exponential_cdf(width, 0.4, 40.0), 1.0, epsilon = 1e-12);
            // density integrates to the CDF increment (midpoint rule)
            let n = 20_000;
            let (lo, hi) = (0.03, 1.7);
            let h = (hi - lo) / n as f64;
            let sum: f64 = (0..n)
                .map(|i| shifted_exponential_pdf(width, 0.4, lo + (i as f64 + 0.5) * h) * h)
                .sum();
            assert_abs_diff_eq!(sum, window_prob(width, 0.4, lo, hi), epsilon = 1e-6);
        }
    }

    #[test]
    fn overlap() {
        assert_eq!(window_overlap((0.0, 1.0), (0.5, 2.0)), 0.5);
        assert_eq!(window_overlap((0.0, 1.0), (1.5, 2.0)), 0.0);
    }

    #[test]
    fn full_windows_integrate_to_one() {
        let c = SourceConfig::ideal();
        let total = cascade_integral(&c, (0.0, 200.0), (0.0, 200.0), 0.0).unwrap();
        assert_abs_diff_eq!(total.re, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(total.im, 0.0, epsilon = 1e-12);
    }
}
