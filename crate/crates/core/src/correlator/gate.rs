use super::CorrelatorError;
use crate::events::{Channel, DetectionEvent};
use crate::source::GateWindows;

/// Bin width of the arrival-time histogram used to locate emission peaks.
pub const PEAK_BIN_NS: f64 = 0.05;

/// Centre of the most populated arrival-time bin of `channel`.
pub fn peak_time(events: &[DetectionEvent], channel: Channel, period_ns: f64) -> Option<f64> {
    let bins = (period_ns / PEAK_BIN_NS).ceil() as usize;
    let mut counts = vec![0u64; bins.max(1)];
    let mut any = false;
    for e in events.iter().filter(|e| e.channel == channel) {
        let i = ((e.time_ns / PEAK_BIN_NS) as usize).min(counts.len() - 1);
        counts[i] += 1;
        any = true;
    }
    if !any {
        return None;
    }
    let best = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .expect("non-empty");
    Some((best as f64 + 0.5) * PEAK_BIN_NS)
}

/// Windows of the given widths centred on each channel's arrival-time peak,
/// shifted inward where they would cross the period boundary.
pub fn centered_gate(
    events: &[DetectionEvent],
    period_ns: f64,
    xx_width_ns: f64,
    x_width_ns: f64,
) -> Result<GateWindows, CorrelatorError> {
    let peak = |channel| {
        peak_time(events, channel, period_ns).ok_or(CorrelatorError::EmptyChannel {
            setting_id: events.first().map_or(0, |e| e.setting_id),
            channel,
        })
    };
    let xx = GateWindows::clamp_center(peak(Channel::Xx)?, xx_width_ns, period_ns);
    let x = GateWindows::clamp_center(peak(Channel::X)?, x_width_ns, period_ns);
    Ok(GateWindows::new(xx, xx_width_ns, x, x_width_ns)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::{Origin, Outcome};

    fn at(channel: Channel, t: f64) -> DetectionEvent {
        DetectionEvent {
            pulse_index: 0,
            channel,
            time_ns: t,
            setting_id: 0,
            outcome: Outcome::Pass,
            origin: Origin::Dot,
        }
    }

    #[test]
    fn peak_and_clamp() {
        let mut ev = vec![at(Channel::Xx, 0.12), at(Channel::Xx, 0.13), at(Channel::Xx, 3.0)];
        ev.extend([at(Channel::X, 2.01), at(Channel::X, 2.02), at(Channel::X, 0.3)]);
        assert_eq!(peak_time(&ev, Channel::Xx, 12.5), Some(0.125));
        let g = centered_gate(&ev, 12.5, 1.0, 1.5).unwrap();
        assert_eq!(g.xx_center_ns, 0.5);
        assert!((g.x_center_ns - 2.025).abs() < 1e-12);
        assert!(centered_gate(&ev[..3], 12.5, 1.0, 1.5).is_err());
    }
}
