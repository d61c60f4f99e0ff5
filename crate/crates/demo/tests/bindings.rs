use std::f64::consts::SQRT_2;

use qdbell_demo::{bell_parameters, chsh_explorer, fidelity_curve, simulate_and_fit, werner_correlations};

#[test]
fn calibrated_source_parameters() {
    let open = bell_parameters(0.32, 1.1608, 1.0, false).unwrap();
    assert_eq!(open.len(), 7);
    assert!((open[3] - 0.794).abs() < 1e-3, "{open:?}");
    assert!((open[4] - 2.15).abs() < 1e-3);
    let gated = bell_parameters(0.32, 1.1608, 1.0, true).unwrap();
    assert!(gated[3] > open[3]);

    let clean = bell_parameters(0.0, 1.0, 0.0, false).unwrap();
    assert!((clean[3] - 1.0).abs() < 1e-9);
    assert!(bell_parameters(0.32, -1.0, 1.0, false).is_err());
}

#[test]
fn fidelity_falls_with_splitting() {
    let curve = fidelity_curve(1.0, 0.0, false, 5.0, 11).unwrap();
    assert_eq!(curve.len(), 11);
    assert!((curve[0] - 1.0).abs() < 1e-9);
    assert!(curve.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(*curve.last().unwrap() < 0.6);
}

#[test]
fn chsh_settings_explorer() {
    let ideal = chsh_explorer(11.25, 33.75, 0.0, 22.5, 1.0).unwrap();
    assert!((ideal[4] - 2.0 * SQRT_2).abs() < 1e-9, "{ideal:?}");
    assert!((ideal[5] - 2.0 * SQRT_2).abs() < 1e-9);
    let half = chsh_explorer(11.25, 33.75, 0.0, 22.5, 0.5).unwrap();
    assert!((half[4] - SQRT_2).abs() < 1e-9);
    assert!(chsh_explorer(10.0, 10.0, 0.0, 22.5, 1.0).is_err());
    assert!(chsh_explorer(11.25, 33.75, 0.0, 22.5, 1.5).is_err());
    let w = werner_correlations(0.5);
    assert!((w[0] - 0.5).abs() < 1e-12 && (w[2] + 0.5).abs() < 1e-12);
}

#[test]
fn scan_and_fit() {
    let fit = simulate_and_fit(0.32, 0.0, 0.0, 20, 1).unwrap();
    assert!((fit.splitting_uev() - 0.32).abs() < 1e-9);
    assert!(fit.verdict());
    assert_eq!(fit.angles().len(), 20);
    let curve = fit.curve(20);
    for (a, b) in curve.iter().zip(fit.values()) {
        assert!((a - b).abs() < 1e-9);
    }
    assert!(simulate_and_fit(0.32, 0.0, 0.06, 4, 1).is_err());
    assert!(!simulate_and_fit(0.8, 0.0, 0.03, 20, 1).unwrap().verdict());
}
