use qdbell::splitting::{default_angles, fit_splitting, simulate_scan, verdict};

/// Fraction of 100 seeded scans whose fitted splitting lies within three
/// standard errors of `truth`, and how many of them pass the verdict.
fn coverage(truth: f64, noise: f64, points: usize) -> (f64, usize) {
    let angles = default_angles(points);
    let mut covered = 0;
    let mut passed = 0;
    for seed in 0..100u64 {
        let phase = (seed as f64 * 7.3) % 90.0;
        let scan = simulate_scan(truth, phase, noise, &angles, seed).unwrap();
        let fit = fit_splitting(&scan).unwrap();
        assert!(fit.splitting_uev >= 0.0);
        if (fit.splitting_uev - truth).abs() <= 3.0 * fit.sigma_uev {
            covered += 1;
        }
        if verdict(&fit) {
            passed += 1;
        }
    }
    (covered as f64 / 100.0, passed)
}

#[test]
fn splitting_estimate_covers_truth() {
    let (frac, passed) = coverage(0.32, 0.06, 20);
    assert!(frac >= 0.95, "coverage {frac}");
    assert_eq!(passed, 100);
}

#[test]
fn pure_noise_is_consistent_with_zero() {
    let (frac, _) = coverage(0.0, 0.06, 20);
    assert!(frac >= 0.95, "coverage {frac}");
}

#[test]
fn large_splitting_fails_verdict() {
    let (frac, passed) = coverage(0.8, 0.06, 20);
    assert!(frac >= 0.95);
    assert_eq!(passed, 0);
}

#[test]
fn error_shrinks_with_more_points() {
    let sigma = |n| {
        let scan = simulate_scan(0.32, 10.0, 0.06, &default_angles(n), 3).unwrap();
        fit_splitting(&scan).unwrap().sigma_uev
    };
    let ratio = sigma(20) / sigma(80);
    assert!((ratio - 2.0).abs() < 0.05, "ratio {ratio}");
}
