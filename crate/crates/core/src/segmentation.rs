//! Single-segment STM conversion and time-based assignment of hypothesis
//! tokens to reference segments.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formats::{CtmEntry, StmSegment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SegmentationMode {
    #[default]
    PerSegment,
    SingleSegment,
}

/// Merge all segments of one (recording, channel) stream into a single long
/// segment. Words are concatenated in (start, file-order) order, the span is
/// the union, optionality flags are preserved, and the earliest segment's
/// speaker id is kept. Idempotent.
pub fn merge_stm(segments: &[StmSegment]) -> MergeOutcome {
    let mut groups: BTreeMap<(String, String), Vec<(usize, &StmSegment)>> = BTreeMap::new();
    for (i, seg) in segments.iter().enumerate() {
        groups
            .entry((seg.recording_id.clone(), seg.channel.clone()))
            .or_default()
            .push((i, seg));
    }
    let mut merged = Vec::new();
    let mut warnings = Vec::new();
    for ((recording_id, channel), mut members) in groups {
        members.sort_by(|(ia, a), (ib, b)| {
            a.start
                .partial_cmp(&b.start)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ia.cmp(ib))
        });
        for pair in members.windows(2) {
            if pair[1].1.start < pair[0].1.end {
                warnings.push(format!(
                    "{recording_id} {channel}: segments [{}, {}] and [{}, {}] overlap; merged in start order",
                    pair[0].1.start, pair[0].1.end, pair[1].1.start, pair[1].1.end
                ));
            }
        }
        let words = members
            .iter()
            .flat_map(|(_, s)| s.words.iter().cloned())
            .collect();
        merged.push(StmSegment {
            recording_id,
            channel,
            speaker_id: members[0].1.speaker_id.clone(),
            start: members
                .iter()
                .map(|(_, s)| s.start)
                .fold(f64::INFINITY, f64::min),
            end: members
                .iter()
                .map(|(_, s)| s.end)
                .fold(f64::NEG_INFINITY, f64::max),
            label_tags: members[0].1.label_tags.clone(),
            words,
        });
    }
    MergeOutcome { merged, warnings }
}

#[derive(Debug, Clone)]
pub struct MergeOutcome {
    pub merged: Vec<StmSegment>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Assignment {
    /// Hypothesis stream per segment, parallel to the input segment list.
    pub streams: Vec<Vec<CtmEntry>>,
    pub warnings: Vec<String>,
}

/// Assign each hypothesis entry to the reference segment containing its
/// midpoint. Midpoints in inter-segment gaps go to the nearer boundary, ties
/// to the earlier segment. ALT blocks are assigned as a unit by their first
/// alternative's first token. Tokens farther than `slack` seconds from every
/// segment draw a warning and go to the nearest one anyway.
pub fn assign_hyp_to_segments(
    entries: &[CtmEntry],
    segments: &[StmSegment],
    slack: f64,
) -> Result<Assignment> {
    let mut by_channel: BTreeMap<(&str, &str), Vec<usize>> = BTreeMap::new();
    for (i, seg) in segments.iter().enumerate() {
        by_channel
            .entry((seg.recording_id.as_str(), seg.channel.as_str()))
            .or_default()
            .push(i);
    }
    let mut streams: Vec<Vec<CtmEntry>> = vec![Vec::new(); segments.len()];
    let mut warnings = Vec::new();
    for entry in entries {
        let key = (entry.recording_id(), entry.channel());
        let candidates = by_channel.get(&key).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "hypothesis token for {} {} has no reference segments",
                key.0, key.1
            ))
        })?;
        let midpoint = match entry {
            CtmEntry::Token(t) => t.midpoint(),
            CtmEntry::Alt(b) => match b.first_token() {
                Some(t) => t.midpoint(),
                None => segments[candidates[0]].start,
            },
        };
        let mut best = candidates[0];
        let mut best_distance = f64::INFINITY;
        for &si in candidates {
            let seg = &segments[si];
            let distance = if midpoint < seg.start {
                seg.start - midpoint
            } else if midpoint > seg.end {
                midpoint - seg.end
            } else {
                0.0
            };
            // Strict improvement keeps ties on the earlier segment.
            if distance < best_distance {
                best_distance = distance;
                best = si;
            }
        }
        if best_distance > slack {
            warnings.push(format!(
                "{} {}: token at {midpoint}s lies {best_distance:.2}s outside every segment; assigned to nearest",
                key.0, key.1
            ));
        }
        streams[best].push(entry.clone());
    }
    Ok(Assignment { streams, warnings })
}
