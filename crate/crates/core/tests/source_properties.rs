mod common;

use approx::assert_abs_diff_eq;
use qdbell::polarization::{correlation_e, Basis, BasisPair, C64};
use qdbell::rng::stream_rng;
use qdbell::source::*;
use rand::Rng;

fn random_config<R: Rng>(rng: &mut R) -> SourceConfig {
    let tau_bg = rng.random_range(0.05..0.3);
    SourceConfig {
        splitting_uev: rng.random_range(0.0..2.0),
        tau_xx_ns: rng.random_range(0.2..0.8),
        tau_x_ns: rng.random_range(tau_bg + 0.1..2.5),
        pulse_width_ns: rng.random_range(0.0..0.15),
        rep_period_ns: 12.5,
        background_fraction: rng.random_range(0.01..0.3),
        tau_bg_ns: tau_bg,
        reexcite_prob: rng.random_range(0.0..0.1),
        dark_rate_hz: rng.random_range(0.0..2.0e5),
        detect_efficiency: rng.random_range(0.1..1.0),
        emission_prob: rng.random_range(0.2..1.0),
    }
}

fn fidelity_of(c: [f64; 3]) -> f64 {
    (1.0 + c[0] + c[1] - c[2]) / 4.0
}

/// `⟨e^{iωτ}⟩` over cascades accepted by the gate, by nested quadrature of the
/// joint emission density.
fn oracle_gated_phase(c: &SourceConfig, g: &GateWindows) -> C64 {
    let (h0, h1) = g.xx_range();
    let (g0, g1) = g.x_range();
    let omega = c.precession_rate();
    let f_xx = |t: f64| {
        if t < 0.0 {
            return 0.0;
        }
        let w = c.pulse_width_ns;
        if w == 0.0 {
            return (-t / c.tau_xx_ns).exp() / c.tau_xx_ns;
        }
        let lo = (t - w).max(0.0);
        ((-lo / c.tau_xx_ns).exp() - (-t / c.tau_xx_ns).exp()) / w
    };
    let inner = |t: f64, part: u8| {
        let lo = (g0 - t).max(0.0);
        let hi = g1 - t;
        common::adaptive_simpson(
            &|tau: f64| {
                let p = (-tau / c.tau_x_ns).exp() / c.tau_x_ns;
                match part {
                    0 => p,
                    1 => p * (omega * tau).cos(),
                    _ => p * (omega * tau).sin(),
                }
            },
            lo,
            hi,
            1e-13,
        )
    };
    let mut cuts = vec![h0.max(0.0), h1.min(g1)];
    for k in [c.pulse_width_ns, g0] {
        if k > cuts[0] && k < cuts[1] {
            cuts.push(k);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let outer = |part: u8| {
        cuts.windows(2)
            .map(|w| common::adaptive_simpson(&|t| f_xx(t) * inner(t, part), w[0], w[1], 1e-13))
            .sum::<f64>()
    };
    let norm = outer(0);
    C64::new(outer(1) / norm, outer(2) / norm)
}

#[test]
fn ungated_suppression_matches_quadrature() {
    let mut rng = stream_rng(5, 0);
    for _ in 0..100 {
        let c = random_config(&mut rng);
        let omega = c.precession_rate();
        let oracle_re = common::adaptive_simpson(
            &|tau: f64| (omega * tau).cos() * (-tau / c.tau_x_ns).exp() / c.tau_x_ns,
            0.0,
            60.0 * c.tau_x_ns,
            1e-12,
        );
        let oracle_im = common::adaptive_simpson(
            &|tau: f64| (omega * tau).sin() * (-tau / c.tau_x_ns).exp() / c.tau_x_ns,
            0.0,
            60.0 * c.tau_x_ns,
            1e-12,
        );
        let b = uncorrelated_fraction(&c, None).unwrap();
        let rho = time_averaged_state(&c, None).unwrap();
        let off = rho.rho()[(3, 0)] * 2.0 / (1.0 - b);
        assert_abs_diff_eq!(off.re, oracle_re, epsilon = 1e-8);
        assert_abs_diff_eq!(off.im, oracle_im, epsilon = 1e-8);
    }
}

#[test]
fn gated_phase_average_matches_nested_quadrature() {
    let mut rng = stream_rng(6, 0);
    for i in 0..100 {
        let c = random_config(&mut rng);
        let start = rng.random_range(0.0..0.6);
        let gate = GateWindows::starting_at(start, rng.random_range(0.5..2.0), rng.random_range(0.8..3.0)).unwrap();
        let got = phase_average(&c, Some(&gate)).unwrap().mean_phase;
        let want = oracle_gated_phase(&c, &gate);
        assert!((got - want).norm() < 1e-8, "config {i}: {got} vs {want}");
    }
}

#[test]
fn time_averaged_states_are_valid() {
    let mut rng = stream_rng(7, 0);
    for _ in 0..200 {
        let c = random_config(&mut rng);
        let gate = GateWindows::starting_at(rng.random_range(0.0..1.0), 1.0, 1.5).unwrap();
        for g in [None, Some(&gate)] {
            let rho = time_averaged_state(&c, g).unwrap();
            assert!(rho.eigenvalues().iter().all(|&l| l >= -1e-10));
            assert_abs_diff_eq!(rho.rho().trace().re, 1.0, epsilon = 1e-12);
            let h = rho.rho() - rho.rho().adjoint();
            assert!(h.iter().all(|z| z.norm() < 1e-12));
        }
    }
}

#[test]
fn splitting_only_degrades_off_axis_correlations() {
    let mut rng = stream_rng(8, 0);
    for _ in 0..20 {
        let mut c = random_config(&mut rng);
        let mut last: Option<[f64; 3]> = None;
        for k in 0..40 {
            c.splitting_uev = k as f64 * 0.05;
            let now = predicted_correlations(&c, None).unwrap();
            if let Some(prev) = last {
                assert!(now[1] <= prev[1] + 1e-12);
                assert_abs_diff_eq!(now[0], prev[0], epsilon = 1e-10);
            }
            last = Some(now);
        }
    }
}

#[test]
fn dephasing_example() {
    let mut c = SourceConfig::ideal();
    c.splitting_uev = 0.32;
    c.tau_x_ns = 1.0;
    let [r, d, ci] = predicted_correlations(&c, None).unwrap();
    let x = 0.32 / HBAR_UEV_NS;
    assert_abs_diff_eq!(r, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(d, 1.0 / (1.0 + x * x), epsilon = 1e-12);
    assert_abs_diff_eq!(d, 0.809, epsilon = 1e-3);
    assert_abs_diff_eq!(ci, -d, epsilon = 1e-12);
}

/// With the windows opening once the pulse and two background lifetimes
/// have passed, gating never lowers the fidelity.
#[test]
fn gating_helps_when_background_is_fast() {
    // Windows open once the pulse and background transient are over and stay
    // open for about three lifetimes of each photon.
    let mut rng = stream_rng(9, 0);
    for i in 0..1000 {
        let c = random_config(&mut rng);
        let gate = GateWindows::starting_at(
            c.pulse_width_ns + 2.0 * c.tau_bg_ns,
            (3.0 * c.tau_xx_ns).max(1.0),
            (3.0 * c.tau_x_ns).max(1.5),
        )
        .unwrap();
        let open = fidelity_of(predicted_correlations(&c, None).unwrap());
        let gated = fidelity_of(predicted_correlations(&c, Some(&gate)).unwrap());
        assert!(gated >= open, "config {i} {c:?}: gated {gated} < open {open}");
    }
}

#[test]
fn noise_budget_examples() {
    assert_eq!(uncorrelated_fraction(&SourceConfig::ideal(), None).unwrap(), 0.0);

    // Dark counts are flat in time: a 1 ns window keeps 1/12.5 of them.
    let mut dark = SourceConfig::ideal();
    dark.emission_prob = 0.0;
    dark.dark_rate_hz = 200.0;
    let open = noise_budget(&dark, None).unwrap();
    let gate = GateWindows::new(5.0, 1.0, 5.0, 1.0).unwrap();
    let gated = noise_budget(&dark, Some(&gate)).unwrap();
    assert_abs_diff_eq!(open.singles_xx / gated.singles_xx, 12.5, epsilon = 1e-9);
    assert_abs_diff_eq!(open.singles_x / gated.singles_x, 12.5, epsilon = 1e-9);

    // A fast background transient is mostly over once the gate opens.
    let mut bg = SourceConfig::ideal();
    bg.background_fraction = 0.1;
    bg.tau_bg_ns = 0.2;
    let gate = GateWindows::starting_at(0.3, 1.0, 1.5).unwrap();
    let open = noise_budget(&bg, None).unwrap();
    let gated = noise_budget(&bg, Some(&gate)).unwrap();
    assert!(gated.accidental < open.accidental);
    assert!(gated.fraction() < open.fraction());
}

#[test]
fn rectilinear_unaffected_for_evolved_states() {
    for tau in [0.0, 0.5, 2.0, 7.0] {
        let s = evolved_pure_state(0.32, tau);
        assert_abs_diff_eq!(
            correlation_e(&s, &BasisPair::same(Basis::Rectilinear)),
            1.0,
            epsilon = 1e-12
        );
    }
}
