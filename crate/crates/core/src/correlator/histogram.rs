use super::CorrelatorError;
use crate::events::{Channel, DetectionEvent};
use crate::source::GateWindows;

/// Default number of pulse offsets on either side of zero.
pub const DEFAULT_MAX_OFFSET: usize = 10;

/// XX–X pair counts per pulse offset `k = pulse(X) − pulse(XX)`, `|k| ≤ K`,
/// split into co-polarized (same port) and cross-polarized pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceHistogram {
    pub setting_id: u32,
    pub gated: bool,
    pub max_offset: usize,
    /// Pulses in the run the events came from.
    pub pulses: u64,
    co: Vec<u64>,
    cross: Vec<u64>,
}

impl CoincidenceHistogram {
    pub fn empty(setting_id: u32, gated: bool, max_offset: usize, pulses: u64) -> Self {
        Self {
            setting_id,
            gated,
            max_offset,
            pulses,
            co: vec![0; 2 * max_offset + 1],
            cross: vec![0; 2 * max_offset + 1],
        }
    }

    fn index(&self, offset: i64) -> Option<usize> {
        let k = self.max_offset as i64;
        (-k..=k).contains(&offset).then(|| (offset + k) as usize)
    }

    pub fn co(&self, offset: i64) -> u64 {
        self.index(offset).map_or(0, |i| self.co[i])
    }

    pub fn cross(&self, offset: i64) -> u64 {
        self.index(offset).map_or(0, |i| self.cross[i])
    }

    pub fn co_counts(&self) -> &[u64] {
        &self.co
    }

    pub fn cross_counts(&self) -> &[u64] {
        &self.cross
    }

    /// Adds the counts of a histogram built from a disjoint set of XX events of
    /// the same run.
    pub fn merge(&mut self, other: &CoincidenceHistogram) -> Result<(), CorrelatorError> {
        if (self.setting_id, self.gated, self.max_offset, self.pulses)
            != (other.setting_id, other.gated, other.max_offset, other.pulses)
        {
            return Err(CorrelatorError::Incompatible(
                "histograms differ in setting, gate, offset range or pulse count".into(),
            ));
        }
        for (a, b) in self.co.iter_mut().zip(&other.co) {
            *a += b;
        }
        for (a, b) in self.cross.iter_mut().zip(&other.cross) {
            *a += b;
        }
        Ok(())
    }
}

/// Pairs every accepted XX event of `setting_id` with every accepted X event
/// at most `max_offset` pulses away. `events` must be sorted by pulse index
/// (other settings may be interleaved in blocks and are skipped).
pub fn build_histogram(
    events: &[DetectionEvent],
    setting_id: u32,
    gate: Option<&GateWindows>,
    pulses: u64,
    max_offset: usize,
) -> Result<CoincidenceHistogram, CorrelatorError> {
    if max_offset < DEFAULT_MAX_OFFSET {
        return Err(CorrelatorError::Incompatible(format!(
            "offset range {max_offset} leaves fewer than the required side peaks"
        )));
    }
    let accept = |e: &&DetectionEvent| {
        e.setting_id == setting_id
            && match (gate, e.channel) {
                (None, _) => true,
                (Some(g), Channel::Xx) => g.accepts_xx(e.time_ns),
                (Some(g), Channel::X) => g.accepts_x(e.time_ns),
            }
    };
    let xx: Vec<&DetectionEvent> = events
        .iter()
        .filter(|e| e.channel == Channel::Xx)
        .filter(accept)
        .collect();
    let x: Vec<&DetectionEvent> = events
        .iter()
        .filter(|e| e.channel == Channel::X)
        .filter(accept)
        .collect();
    for (list, channel) in [(&xx, Channel::Xx), (&x, Channel::X)] {
        if list.is_empty() {
            return Err(CorrelatorError::EmptyChannel {
                setting_id,
                channel,
            });
        }
        if list.windows(2).any(|w| w[0].pulse_index > w[1].pulse_index) {
            return Err(CorrelatorError::Unsorted);
        }
    }

    let fold = |part: &[&DetectionEvent]| {
        let mut h = CoincidenceHistogram::empty(setting_id, gate.is_some(), max_offset, pulses);
        let k = max_offset as u64;
        let mut lo = 0usize;
        for a in part {
            let first = a.pulse_index.saturating_sub(k);
            while lo < x.len() && x[lo].pulse_index < first {
                lo += 1;
            }
            for b in &x[lo..] {
                if b.pulse_index > a.pulse_index + k {
                    break;
                }
                let i = (b.pulse_index as i64 - a.pulse_index as i64 + k as i64) as usize;
                if a.outcome == b.outcome {
                    h.co[i] += 1;
                } else {
                    h.cross[i] += 1;
                }
            }
        }
        h
    };

    const CHUNK: usize = 1 << 15;
    #[cfg(feature = "parallel")]
    let parts: Vec<CoincidenceHistogram> = {
        use rayon::prelude::*;
        xx.par_chunks(CHUNK).map(fold).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<CoincidenceHistogram> = xx.chunks(CHUNK).map(fold).collect();

    let mut total = CoincidenceHistogram::empty(setting_id, gate.is_some(), max_offset, pulses);
    for p in &parts {
        total.merge(p)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::{Origin, Outcome};

    fn ev(pulse: u64, channel: Channel, outcome: Outcome, t: f64) -> DetectionEvent {
        DetectionEvent {
            pulse_index: pulse,
            channel,
            time_ns: t,
            setting_id: 0,
            outcome,
            origin: Origin::Dot,
        }
    }

    #[test]
    fn brute_force_agreement() {
        use Channel::*;
        use Outcome::*;
        let mut events = Vec::new();
        for p in 0..200u64 {
            if p % 3 != 1 {
                events.push(ev(p, Xx, if p % 2 == 0 { Pass } else { Orthogonal }, 0.5));
            }
            if p % 5 != 2 {
                events.push(ev(p, X, if p % 7 < 3 { Pass } else { Orthogonal }, 1.0));
            }
        }
        let h = build_histogram(&events, 0, None, 200, 10).unwrap();
        for k in -10i64..=10 {
            let (mut co, mut cr) = (0, 0);
            for a in events.iter().filter(|e| e.channel == Xx) {
                for b in events.iter().filter(|e| e.channel == X) {
                    if b.pulse_index as i64 - a.pulse_index as i64 == k {
                        if a.outcome == b.outcome {
                            co += 1;
                        } else {
                            cr += 1;
                        }
                    }
                }
            }
            assert_eq!((h.co(k), h.cross(k)), (co, cr), "offset {k}");
        }
    }

    #[test]
    fn gate_filters_before_pairing() {
        use Channel::*;
        use Outcome::*;
        let events = vec![
            ev(0, Xx, Pass, 0.5),
            ev(0, X, Pass, 0.9),
            ev(1, Xx, Pass, 5.0),
            ev(1, X, Pass, 0.9),
        ];
        let gate = GateWindows::new(0.5, 1.0, 1.0, 1.5).unwrap();
        let h = build_histogram(&events, 0, Some(&gate), 2, 10).unwrap();
        assert_eq!(h.co(0), 1);
        assert_eq!(h.co(1), 1);
        assert_eq!(h.co(-1), 0);
        assert!(h.gated);
    }

    #[test]
    fn empty_channel_is_an_error() {
        let events = vec![ev(0, Channel::Xx, Outcome::Pass, 0.5)];
        assert!(matches!(
            build_histogram(&events, 0, None, 1, 10),
            Err(CorrelatorError::EmptyChannel { channel: Channel::X, .. })
        ));
        assert!(build_histogram(&events, 0, None, 1, 5).is_err());
    }
}
