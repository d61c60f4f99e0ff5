mod common;

use std::collections::HashMap;

use qdbell::correlator::{analyze_setting, CorrelatorError};
use qdbell::events::{
    generate_pulses, generate_setting, read_events, write_events, AnalyzerSetting, Channel,
    DetectionEvent, EventError, Origin, Outcome, RunManifest,
};
use qdbell::presets;
use qdbell::rng::stream_rng;
use qdbell::source::{predicted_correlations, shifted_exponential_cdf, GateWindows, SourceConfig};
use rand::Rng;

fn manifest(config: SourceConfig, pulses: u64, seed: u64) -> RunManifest {
    RunManifest::new(config, AnalyzerSetting::standard_bases(), pulses, seed).unwrap()
}

/// Outcome pairs of pulses where both channels fired exactly once.
fn pulse_pairs(events: &[DetectionEvent]) -> Vec<(Outcome, Outcome)> {
    let mut by_pulse: HashMap<u64, (Vec<Outcome>, Vec<Outcome>)> = HashMap::new();
    for e in events {
        let slot = by_pulse.entry(e.pulse_index).or_default();
        match e.channel {
            Channel::Xx => slot.0.push(e.outcome),
            Channel::X => slot.1.push(e.outcome),
        }
    }
    by_pulse
        .into_values()
        .filter(|(a, b)| a.len() == 1 && b.len() == 1)
        .map(|(a, b)| (a[0], b[0]))
        .collect()
}

#[test]
fn ideal_source_is_perfectly_correlated() {
    let m = manifest(presets::ideal(), 200_000, 1);
    let rect = generate_setting(&m, 0).unwrap();
    let circ = generate_setting(&m, 2).unwrap();

    let pairs = pulse_pairs(&rect.events);
    assert!(pairs.len() > 20_000);
    assert!(pairs.iter().all(|(a, b)| a == b), "rectilinear outcomes must agree");

    let pairs = pulse_pairs(&circ.events);
    assert!(pairs.len() > 20_000);
    assert!(pairs.iter().all(|(a, b)| a != b), "circular outcomes must disagree");

    let all: Vec<_> = rect.events.iter().chain(&circ.events).copied().collect();
    let c_rect = analyze_setting(&all, &m.settings[0], None, m.pulses_per_setting).unwrap();
    let c_circ = analyze_setting(&all, &m.settings[2], None, m.pulses_per_setting).unwrap();
    assert!((c_rect.c - 1.0).abs() < 1e-12);
    assert!((c_circ.c + 1.0).abs() < 1e-12);
}

#[test]
fn dark_counts_follow_rate_and_are_flat() {
    let mut c = SourceConfig::ideal();
    c.emission_prob = 0.0;
    c.dark_rate_hz = 1.0e6;
    let pulses = 1_000_000;
    let run = generate_setting(&manifest(c, pulses, 2), 0).unwrap();
    let expected = 2.0 * c.dark_rate_hz * c.rep_period_ns * 1e-9 * pulses as f64;
    let n = run.events.len() as f64;
    assert!(common::within_sigmas(n, expected.sqrt(), expected, 5.0), "{n} vs {expected}");
    assert!(run.events.iter().all(|e| e.origin == Origin::Dark));

    let mean_t = run.events.iter().map(|e| e.time_ns).sum::<f64>() / n;
    let sigma = c.rep_period_ns / 12f64.sqrt() / n.sqrt();
    assert!(common::within_sigmas(mean_t, sigma, c.rep_period_ns / 2.0, 5.0));

    let gate = GateWindows::new(5.0, 1.0, 5.0, 1.0).unwrap();
    let kept = run
        .events
        .iter()
        .filter(|e| match e.channel {
            Channel::Xx => gate.accepts_xx(e.time_ns),
            Channel::X => gate.accepts_x(e.time_ns),
        })
        .count() as f64;
    let ratio = n / kept;
    assert!((ratio - 12.5).abs() < 0.5, "gate suppression {ratio}");
}

#[test]
fn unpolarized_light_passes_half_the_time() {
    let run = generate_setting(&manifest(presets::uncorrelated(), 200_000, 3), 1).unwrap();
    let n = run.events.len() as f64;
    let pass = run.events.iter().filter(|e| e.outcome == Outcome::Pass).count() as f64;
    assert!(run.events.iter().all(|e| e.origin == Origin::Background));
    assert!(common::within_sigmas(pass / n, 0.5 / n.sqrt(), 0.5, 5.0), "{}", pass / n);
}

#[test]
fn biexciton_arrival_times_follow_lifetime() {
    let c = presets::calibrated();
    let run = generate_setting(&manifest(c, 400_000, 4), 0).unwrap();
    let times: Vec<f64> = run
        .events
        .iter()
        .filter(|e| e.channel == Channel::Xx && e.origin == Origin::Dot)
        .map(|e| e.time_ns)
        .collect();
    // Kolmogorov distance of the XX arrival times against the analytic CDF,
    // which ignores the negligible truncation at the period end.
    let mut sorted = times.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let f = shifted_exponential_cdf(c.pulse_width_ns, c.tau_xx_ns, t);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max);
    assert!(d < 1.95 / n.sqrt(), "KS distance {d} over {n} samples");
}

fn random_config<R: Rng>(rng: &mut R) -> SourceConfig {
    SourceConfig {
        splitting_uev: rng.random_range(0.0..1.5),
        tau_xx_ns: rng.random_range(0.2..0.6),
        tau_x_ns: rng.random_range(0.5..1.5),
        pulse_width_ns: rng.random_range(0.02..0.15),
        rep_period_ns: 12.5,
        background_fraction: rng.random_range(0.0..0.15),
        tau_bg_ns: rng.random_range(0.05..0.3),
        reexcite_prob: rng.random_range(0.0..0.08),
        dark_rate_hz: rng.random_range(0.0..5.0e4),
        detect_efficiency: rng.random_range(0.3..0.8),
        emission_prob: rng.random_range(0.5..1.0),
    }
}

#[test]
fn measured_correlations_match_prediction() {
    let mut rng = stream_rng(21, 0);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let c = random_config(&mut rng);
        let gate = (i % 2 == 1).then(|| {
            GateWindows::starting_at(c.pulse_width_ns + 2.0 * c.tau_bg_ns, 1.0, 2.0).unwrap()
        });
        let m = manifest(c, 200_000, 100 + i);
        let predicted = predicted_correlations(&c, gate.as_ref()).unwrap();
        for (k, setting) in m.settings.iter().enumerate() {
            let run = generate_setting(&m, setting.id).unwrap();
            let r = analyze_setting(&run.events, setting, gate.as_ref(), m.pulses_per_setting)
                .unwrap();
            let z = r.measured().sigmas_from(predicted[k]);
            worst = worst.max(z);
            assert!(z < 4.0, "config {i} {c:?} setting {}: {} ± {} vs {}", setting.label, r.c, r.sigma_c, predicted[k]);
        }
    }
    println!("largest deviation {worst:.2} sigma");
}

#[test]
fn generation_is_chunk_invariant() {
    let m = manifest(presets::calibrated(), 50_000, 5);
    let whole = generate_setting(&m, 1).unwrap();
    let mut pieces = Vec::new();
    let mut overflow = 0;
    for r in [0..7_001, 7_001..16_384, 16_384..40_000, 40_000..50_000] {
        let part = generate_pulses(&m, 1, r).unwrap();
        overflow += part.overflow_resamples;
        pieces.extend(part.events);
    }
    assert_eq!(whole.events, pieces);
    assert_eq!(whole.overflow_resamples, overflow);

    let reseeded = generate_setting(&manifest(presets::calibrated(), 50_000, 6), 1).unwrap();
    assert_ne!(whole.events, reseeded.events);
}

#[test]
fn event_file_round_trip() {
    let m = manifest(presets::calibrated(), 20_000, 7);
    let run: Vec<_> = (0..3).map(|id| generate_setting(&m, id).unwrap()).collect();
    for with_origin in [false, true] {
        let mut buf = Vec::new();
        let digest = write_events(&mut buf, &m, &run, with_origin).unwrap();
        let file = read_events(buf.as_slice()).unwrap();
        assert_eq!(file.digest, digest);
        assert_eq!(file.manifest, m);
        for s in &run {
            let back = file.setting_events(s.setting_id);
            assert_eq!(back.len(), s.events.len());
            for (a, b) in back.iter().zip(&s.events) {
                assert_eq!((a.pulse_index, a.channel, a.outcome), (b.pulse_index, b.channel, b.outcome));
                assert!((a.time_ns - b.time_ns).abs() <= 5e-7);
                if with_origin {
                    assert_eq!(a.origin, b.origin);
                }
            }
        }
    }

    let mut buf = Vec::new();
    write_events(&mut buf, &m, &run[..1], false).unwrap();
    let text = String::from_utf8(buf).unwrap().replacen("seed = 7", "seed = 8", 1);
    assert!(matches!(read_events(text.as_bytes()), Err(EventError::DigestMismatch { .. })));
}

#[test]
fn empty_channel_is_reported() {
    let mut c = SourceConfig::ideal();
    c.emission_prob = 0.0;
    let m = manifest(c, 1_000, 8);
    let run = generate_setting(&m, 0).unwrap();
    assert!(run.events.is_empty());
    assert!(matches!(
        analyze_setting(&run.events, &m.settings[0], None, 1_000),
        Err(CorrelatorError::EmptyChannel { .. })
    ));
}
