use std::ops::Range;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use super::{AnalyzerSetting, Channel, DetectionEvent, EventError, Origin, Outcome, RunManifest};
use crate::polarization::{BasisPair, TwoPhotonKet};
use crate::rng::{pulse_rng, PulseRng};
use crate::source::SourceConfig;

/// Pulses handed to one worker at a time.
const CHUNK_PULSES: u64 = 1 << 14;

/// Events of one analyzer setting, ordered by pulse, then channel (XX before
/// X), then time.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSetting {
    pub setting_id: u32,
    pub pulses: u64,
    pub events: Vec<DetectionEvent>,
    /// Cascades redrawn because the exciton photon fell past the period.
    pub overflow_resamples: u64,
}

/// Cascade emission times `(t_xx, t_x)` after the start of the pulse, and the
/// number of draws rejected because `t_x` fell outside the period.
pub fn sample_emission_times<R: Rng + ?Sized>(config: &SourceConfig, rng: &mut R) -> (f64, f64, u64) {
    let mut rejected = 0;
    loop {
        let start = config.pulse_width_ns * rng.random::<f64>();
        let t_xx = start + config.tau_xx_ns * rng.sample::<f64, _>(Exp1);
        let t_x = t_xx + config.tau_x_ns * rng.sample::<f64, _>(Exp1);
        if t_x < config.rep_period_ns {
            return (t_xx, t_x, rejected);
        }
        rejected += 1;
    }
}

/// Generates every setting of the manifest in order.
pub fn generate_run(manifest: &RunManifest) -> Result<Vec<GeneratedSetting>, EventError> {
    manifest.validate()?;
    manifest
        .settings
        .iter()
        .map(|s| generate_setting(manifest, s.id))
        .collect()
}

pub fn generate_setting(
    manifest: &RunManifest,
    setting_id: u32,
) -> Result<GeneratedSetting, EventError> {
    generate_pulses(manifest, setting_id, 0..manifest.pulses_per_setting)
}

/// Generates the pulses in `range` for one setting. Disjoint ranges can be
/// produced independently and concatenated.
pub fn generate_pulses(
    manifest: &RunManifest,
    setting_id: u32,
    range: Range<u64>,
) -> Result<GeneratedSetting, EventError> {
    manifest.validate()?;
    let setting = manifest.setting(setting_id).ok_or_else(|| {
        EventError::InvalidManifest(format!("no setting with id {setting_id}"))
    })?;
    let pulser = Pulser::new(manifest, setting);
    let chunks: Vec<Range<u64>> = (range.start..range.end)
        .step_by(CHUNK_PULSES as usize)
        .map(|s| s..(s + CHUNK_PULSES).min(range.end))
        .collect();

    #[cfg(feature = "parallel")]
    let parts: Vec<(Vec<DetectionEvent>, u64)> = {
        use rayon::prelude::*;
        chunks.into_par_iter().map(|c| pulser.run(c)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(Vec<DetectionEvent>, u64)> = chunks.into_iter().map(|c| pulser.run(c)).collect();

    let mut events = Vec::with_capacity(parts.iter().map(|p| p.0.len()).sum());
    let mut overflow = 0;
    for (chunk, n) in parts {
        events.extend(chunk);
        overflow += n;
    }
    Ok(GeneratedSetting {
        setting_id,
        pulses: range.end - range.start,
        events,
        overflow_resamples: overflow,
    })
}

struct Pulser {
    config: SourceConfig,
    pair: BasisPair,
    seed: u64,
    setting_id: u32,
    cascade_prob: f64,
    background: Option<Poisson<f64>>,
    dark: Option<Poisson<f64>>,
}

impl Pulser {
    fn new(manifest: &RunManifest, setting: &AnalyzerSetting) -> Self {
        let config = manifest.config;
        let poisson = |mean: f64| (mean > 0.0).then(|| Poisson::new(mean).expect("finite positive mean"));
        Self {
            config,
            pair: setting.basis_pair(),
            seed: manifest.seed,
            setting_id: setting.id,
            cascade_prob: config.cascade_prob(),
            background: poisson(config.background_mean()),
            dark: poisson(config.dark_mean_per_period()),
        }
    }

    fn run(&self, pulses: Range<u64>) -> (Vec<DetectionEvent>, u64) {
        let expected = (pulses.end - pulses.start) as f64
            * 2.0
            * (self.config.detect_efficiency + self.config.background_mean() + 0.01);
        let mut events = Vec::with_capacity(expected as usize);
        let mut overflow = 0;
        for pulse in pulses {
            let start = events.len();
            overflow += self.pulse(pulse, &mut events);
            events[start..].sort_by(|a: &DetectionEvent, b| {
                a.channel.cmp(&b.channel).then(a.time_ns.total_cmp(&b.time_ns))
            });
        }
        (events, overflow)
    }

    /// Appends the detections of one pulse, in no particular order; returns
    /// the overflow count.
    fn pulse(&self, pulse_index: u64, out: &mut Vec<DetectionEvent>) -> u64 {
        let c = &self.config;
        let mut rng = pulse_rng(self.seed, self.setting_id, pulse_index);
        let mut push = |channel, time_ns, outcome, origin| {
            out.push(DetectionEvent {
                pulse_index,
                channel,
                time_ns,
                setting_id: self.setting_id,
                outcome,
                origin,
            })
        };
        let mut overflow = 0;

        if rng.random::<f64>() < self.cascade_prob {
            let (t_xx, t_x, rejected) = sample_emission_times(c, &mut rng);
            overflow = rejected;
            let reexcited = rng.random::<f64>() < c.reexcite_prob;
            let (xx_time, xx_outcome, x_outcome, xx_origin) = if reexcited {
                let t = c.pulse_width_ns * rng.random::<f64>();
                (t, coin(&mut rng), coin(&mut rng), Origin::Reexcite)
            } else {
                let phase = c.precession_rate() * (t_x - t_xx);
                let probs = TwoPhotonKet::with_relative_phase(phase).outcome_probabilities(&self.pair);
                let (a, b) = pick_joint(&probs, rng.random::<f64>());
                (t_xx, a, b, Origin::Dot)
            };
            let xx_seen = rng.random::<f64>() < c.detect_efficiency;
            let x_seen = rng.random::<f64>() < c.detect_efficiency;
            if xx_seen {
                push(Channel::Xx, xx_time, xx_outcome, xx_origin);
            }
            if x_seen {
                push(Channel::X, t_x, x_outcome, Origin::Dot);
            }
        }

        if let Some(bg) = &self.background {
            for channel in [Channel::Xx, Channel::X] {
                let n = bg.sample(&mut rng) as u64;
                for _ in 0..n {
                    let t = background_time(c, &mut rng);
                    let seen = rng.random::<f64>() < c.detect_efficiency;
                    let outcome = coin(&mut rng);
                    if seen {
                        push(channel, t, outcome, Origin::Background);
                    }
                }
            }
        }

        if let Some(dark) = &self.dark {
            for channel in [Channel::Xx, Channel::X] {
                let n = dark.sample(&mut rng) as u64;
                for _ in 0..n {
                    let t = c.rep_period_ns * rng.random::<f64>();
                    push(channel, t, coin(&mut rng), Origin::Dark);
                }
            }
        }
        overflow
    }
}

fn coin(rng: &mut PulseRng) -> Outcome {
    if rng.random::<bool>() {
        Outcome::Pass
    } else {
        Outcome::Orthogonal
    }
}

/// Outcomes for a uniform draw `u` against probabilities ordered
/// `(P,P), (P,O), (O,P), (O,O)`.
fn pick_joint(probs: &[f64; 4], u: f64) -> (Outcome, Outcome) {
    use Outcome::{Orthogonal as O, Pass as P};
    const ORDER: [(Outcome, Outcome); 4] = [(P, P), (P, O), (O, P), (O, O)];
    let total: f64 = probs.iter().sum();
    let mut acc = 0.0;
    for (p, o) in probs.iter().zip(ORDER) {
        acc += p / total;
        if u < acc {
            return o;
        }
    }
    *ORDER
        .iter()
        .zip(probs)
        .rev()
        .find(|(_, p)| **p > 0.0)
        .map(|(o, _)| o)
        .unwrap_or(&ORDER[3])
}

fn background_time(c: &SourceConfig, rng: &mut PulseRng) -> f64 {
    loop {
        let t = c.pulse_width_ns * rng.random::<f64>() + c.tau_bg_ns * rng.sample::<f64, _>(Exp1);
        if t < c.rep_period_ns {
            return t;
        }
    }
}
