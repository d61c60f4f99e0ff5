//! Event file format.
//!
//! ```text
//! # qdbell-events 1 digest=<sha256 of the manifest lines>
//! # splitting_ueV = 0.32
//! # ...
//! # setting = rectilinear | xx: pol 0 | x: pol 0
//! 0,XX,0.412345,0,1,dot
//! 0,X,1.203311,0,1,dot
//! ```
//!
//! Records are `pulse_index,channel,time_ns,setting_id,outcome[,origin]` with
//! outcome `1` for the pass port and `0` for the orthogonal one. The origin
//! column is optional.

use std::io::{BufRead, Write};

use super::{
    Channel, DetectionEvent, EventError, GeneratedSetting, Origin, Outcome, RunManifest,
};

const MAGIC: &str = "qdbell-events";
const VERSION: u32 = 1;

/// A parsed event file.
#[derive(Debug, Clone, PartialEq)]
pub struct EventFile {
    pub manifest: RunManifest,
    pub digest: String,
    /// All events, grouped by setting in manifest order.
    pub events: Vec<DetectionEvent>,
}

impl EventFile {
    /// Events of one setting, as a contiguous slice.
    pub fn setting_events(&self, setting_id: u32) -> &[DetectionEvent] {
        let start = self.events.partition_point(|e| self.position(e.setting_id) < self.position(setting_id));
        let end = start + self.events[start..].partition_point(|e| e.setting_id == setting_id);
        &self.events[start..end]
    }

    fn position(&self, setting_id: u32) -> usize {
        self.manifest
            .settings
            .iter()
            .position(|s| s.id == setting_id)
            .unwrap_or(usize::MAX)
    }
}

/// Writes the header and the events of `settings` (in the given order).
/// Returns the manifest digest.
pub fn write_events<W: Write>(
    mut out: W,
    manifest: &RunManifest,
    settings: &[GeneratedSetting],
    with_origin: bool,
) -> Result<String, EventError> {
    let digest = manifest.digest();
    writeln!(out, "# {MAGIC} {VERSION} digest={digest}")?;
    for line in manifest.to_lines() {
        writeln!(out, "# {line}")?;
    }
    for s in settings {
        for e in &s.events {
            let outcome = match e.outcome {
                Outcome::Pass => 1,
                Outcome::Orthogonal => 0,
            };
            write!(
                out,
                "{},{},{:.6},{},{}",
                e.pulse_index,
                e.channel.tag(),
                e.time_ns,
                e.setting_id,
                outcome
            )?;
            if with_origin {
                write!(out, ",{}", e.origin.tag())?;
            }
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(digest)
}

pub fn read_events<R: BufRead>(input: R) -> Result<EventFile, EventError> {
    let mut lines = input.lines().enumerate();
    let parse_err = |line: usize, reason: String| EventError::Parse { line, reason };

    let (_, first) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file".into()))?;
    let first = first?;
    let declared = parse_magic(&first).ok_or_else(|| {
        parse_err(1, format!("expected `# {MAGIC} {VERSION} digest=<hex>`, got {first:?}"))
    })?;

    let mut header = Vec::new();
    let mut body_start = None;
    for (i, line) in lines.by_ref() {
        let line = line?;
        if let Some(rest) = line.strip_prefix('#') {
            header.push(rest.trim().to_string());
        } else {
            body_start = Some((i, line));
            break;
        }
    }
    let manifest = RunManifest::from_lines(header.iter().map(String::as_str))
        .map_err(|e| parse_err(1, format!("header: {e}")))?;
    let found = manifest.digest();
    if found != declared {
        return Err(EventError::DigestMismatch {
            expected: declared,
            found,
        });
    }

    let period = manifest.config.rep_period_ns;
    let mut events = Vec::new();
    let mut last_key: Option<(usize, u64, Channel)> = None;
    let body = body_start
        .into_iter()
        .map(|(i, l)| (i, Ok(l)))
        .chain(lines);
    for (i, line) in body {
        let line: String = line?;
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let e = parse_record(&line).map_err(|r| parse_err(n, r))?;
        let pos = manifest
            .settings
            .iter()
            .position(|s| s.id == e.setting_id)
            .ok_or_else(|| parse_err(n, format!("unknown setting id {}", e.setting_id)))?;
        if e.pulse_index >= manifest.pulses_per_setting {
            return Err(parse_err(n, format!("pulse index {} out of range", e.pulse_index)));
        }
        if !(0.0..period).contains(&e.time_ns) {
            return Err(parse_err(n, format!("time {} outside the period", e.time_ns)));
        }
        let key = (pos, e.pulse_index, e.channel);
        if last_key.is_some_and(|k| k > key) {
            return Err(parse_err(n, "records out of order".into()));
        }
        last_key = Some(key);
        events.push(e);
    }
    Ok(EventFile {
        manifest,
        digest: declared,
        events,
    })
}

fn parse_magic(line: &str) -> Option<String> {
    let mut parts = line.strip_prefix('#')?.split_whitespace();
    if parts.next()? != MAGIC || parts.next()?.parse::<u32>().ok()? != VERSION {
        return None;
    }
    let digest = parts.next()?.strip_prefix("digest=")?;
    (digest.len() == 64 && digest.bytes().all(|b| b.is_ascii_hexdigit())).then(|| digest.to_string())
}

fn parse_record(line: &str) -> Result<DetectionEvent, String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if !(5..=6).contains(&fields.len()) {
        return Err(format!("expected 5 or 6 fields, got {}", fields.len()));
    }
    let pulse_index = fields[0]
        .parse()
        .map_err(|_| format!("bad pulse index {:?}", fields[0]))?;
    let channel = match fields[1] {
        "XX" => Channel::Xx,
        "X" => Channel::X,
        other => return Err(format!("bad channel {other:?}")),
    };
    let time_ns: f64 = fields[2]
        .parse()
        .map_err(|_| format!("bad time {:?}", fields[2]))?;
    let setting_id = fields[3]
        .parse()
        .map_err(|_| format!("bad setting id {:?}", fields[3]))?;
    let outcome = match fields[4] {
        "1" => Outcome::Pass,
        "0" => Outcome::Orthogonal,
        other => return Err(format!("bad outcome {other:?}")),
    };
    let origin = match fields.get(5) {
        Some(tag) => Origin::from_tag(tag).ok_or_else(|| format!("bad origin {tag:?}"))?,
        None => Origin::Dot,
    };
    Ok(DetectionEvent {
        pulse_index,
        channel,
        time_ns,
        setting_id,
        outcome,
        origin,
    })
}
