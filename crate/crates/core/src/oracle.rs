//! Oracle scoring: the minimum achievable error counts when the best
//! alternative may be chosen at every position.
//!
//! Selection ignores acoustic and language-model scores entirely; they only
//! decide rank order, which breaks cost ties in favor of lower ranks.

use flate2::write::GzEncoder;
use flate2::Compression;
use std::io::Write;

use crate::align::{align, AlignmentResult, CostModel};
use crate::error::{Error, Result};
use crate::formats::{write_ctm_with_alts, PhraseAlternativesDoc};
use crate::lattice_ops::{depth_stats, DepthStats, NBestList};
use crate::network::{AltNetwork, Alternative, Slot};

/// Build a hypothesis network from an alternatives document: one slot per
/// position, one alternative per ranked word sequence.
pub fn network_from_phrase_doc(doc: &PhraseAlternativesDoc) -> AltNetwork {
    AltNetwork {
        slots: doc
            .positions
            .iter()
            .map(|pos| Slot {
                alternatives: pos
                    .alternatives
                    .iter()
                    .map(|a| Alternative::from_words(&a.words))
                    .collect(),
            })
            .collect(),
    }
}

/// Encode an n-best list as a single-slot network whose alternatives are the
/// full sequences.
pub fn network_from_nbest(list: &NBestList) -> AltNetwork {
    AltNetwork {
        slots: vec![Slot {
            alternatives: list
                .entries
                .iter()
                .map(|e| Alternative::from_words(&e.words))
                .collect(),
        }],
    }
}

/// The oracle pick from an n-best list.
#[derive(Debug, Clone)]
pub struct NBestOracle {
    /// Rank of the selected hypothesis.
    pub selected: usize,
    pub result: AlignmentResult,
}

/// Score every list member and keep the one minimizing (primary cost, rank).
pub fn oracle_score_nbest(
    reference: &AltNetwork,
    list: &NBestList,
    costs: &CostModel,
) -> Result<NBestOracle> {
    if list.entries.is_empty() {
        return Err(Error::EmptyInput("empty n-best list".into()));
    }
    let mut best: Option<NBestOracle> = None;
    for (rank, entry) in list.entries.iter().enumerate() {
        let hyp = AltNetwork::from_words(&entry.words);
        let result = align(reference, &hyp, costs)?;
        let cost = result.primary_cost(costs);
        if best
            .as_ref()
            .map(|b| cost < b.result.primary_cost(costs))
            .unwrap_or(true)
        {
            best = Some(NBestOracle {
                selected: rank,
                result,
            });
        }
    }
    Ok(best.expect("non-empty list always yields a result"))
}

/// Oracle scoring of an alternatives network: the min-cost alignment path
/// already explores the cross product of choices, so this is the alignment
/// itself.
pub fn oracle_score_network(
    reference: &AltNetwork,
    hypothesis: &AltNetwork,
    costs: &CostModel,
) -> Result<AlignmentResult> {
    align(reference, hypothesis, costs)
}

/// One row of an oracle depth sweep.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub n: usize,
    pub result: AlignmentResult,
    pub depths: DepthStats,
    /// gzip-compressed size of the document emitted as CTM.
    pub serialized_bytes: usize,
}

fn gzip_len(text: &str) -> usize {
    let mut enc = GzEncoder::new(Vec::new(), Compression::default());
    enc.write_all(text.as_bytes()).expect("in-memory gzip");
    enc.finish().expect("in-memory gzip").len()
}

/// Sweep `n_values`, truncating every position to its top n alternatives
/// before oracle scoring. Depth statistics and compressed sizes describe the
/// truncated document.
pub fn oracle_curve(
    reference: &AltNetwork,
    doc: &PhraseAlternativesDoc,
    n_values: &[usize],
    costs: &CostModel,
    recording_id: &str,
    channel: &str,
    frame_rate: f64,
) -> Result<Vec<CurvePoint>> {
    let mut points = Vec::new();
    for &n in n_values {
        if n == 0 {
            return Err(Error::InvalidArgument("oracle_curve requires n >= 1".into()));
        }
        let truncated = doc.truncated(n);
        let result = oracle_score_network(reference, &network_from_phrase_doc(&truncated), costs)?;
        let depths = depth_stats(&truncated.depths())?;
        let ctm = write_ctm_with_alts(&truncated, recording_id, channel, frame_rate);
        points.push(CurvePoint {
            n,
            result,
            depths,
            serialized_bytes: gzip_len(&ctm),
        });
    }
    Ok(points)
}

/// A reference network paired with an alternatives document for one segment.
pub struct CurveInput<'a> {
    pub reference: &'a AltNetwork,
    pub doc: &'a PhraseAlternativesDoc,
    pub recording_id: &'a str,
    pub channel: &'a str,
}

/// Aggregated row of a multi-segment oracle sweep.
#[derive(Debug, Clone)]
pub struct AggregateCurvePoint {
    pub n: usize,
    pub correct: u64,
    pub substituted: u64,
    pub deleted: u64,
    pub inserted: u64,
    pub depths: DepthStats,
    pub serialized_bytes: usize,
}

/// Sweep `n_values` across many segments, summing counts and compressed
/// sizes and pooling per-unit depths.
pub fn oracle_curve_aggregate(
    inputs: &[CurveInput<'_>],
    n_values: &[usize],
    costs: &CostModel,
    frame_rate: f64,
) -> Result<Vec<AggregateCurvePoint>> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput("no segments to score".into()));
    }
    let mut rows = Vec::new();
    for &n in n_values {
        if n == 0 {
            return Err(Error::InvalidArgument("oracle_curve requires n >= 1".into()));
        }
        let mut row = AggregateCurvePoint {
            n,
            correct: 0,
            substituted: 0,
            deleted: 0,
            inserted: 0,
            depths: DepthStats { max: 0, p90: 0, p50: 0 },
            serialized_bytes: 0,
        };
        let mut depths = Vec::new();
        for input in inputs {
            let truncated = input.doc.truncated(n);
            let result =
                oracle_score_network(input.reference, &network_from_phrase_doc(&truncated), costs)?;
            row.correct += result.correct;
            row.substituted += result.substituted;
            row.deleted += result.deleted;
            row.inserted += result.inserted;
            depths.extend(truncated.depths());
            let ctm =
                write_ctm_with_alts(&truncated, input.recording_id, input.channel, frame_rate);
            row.serialized_bytes += gzip_len(&ctm);
        }
        row.depths = depth_stats(&depths)?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{PhraseAlt, PhrasePosition};
    use crate::lattice_ops::NBestEntry;

    fn nb(entries: &[(&[&str], f64)]) -> NBestList {
        NBestList {
            entries: entries
                .iter()
                .map(|(words, weight)| NBestEntry {
                    words: words.iter().map(|w| w.to_string()).collect(),
                    weight: *weight,
                })
                .collect(),
        }
    }

    #[test]
    fn oracle_picks_exact_match_at_lower_priority() {
        let reference = AltNetwork::from_words(&["HELLO", "WORLD"]);
        let list = nb(&[(&["GOODBYE", "WORLD"], 0.0), (&["HELLO", "WORLD"], 1.0)]);
        let oracle = oracle_score_nbest(&reference, &list, &CostModel::default()).unwrap();
        assert_eq!(oracle.selected, 1);
        assert_eq!(oracle.result.errors(), 0);
    }

    #[test]
    fn single_entry_equals_plain_align(){
        let reference = AltNetwork::from_words(&["A", "B"]);
        let list = nb(&[(&["A", "X"], 0.0)]);
        let oracle = oracle_score_nbest(&reference, &list, &CostModel::default()).unwrap();
        let direct = align(
            &reference,
            &AltNetwork::from_words(&["A", "X"]),
            &CostModel::default(),
        )
        .unwrap();
        assert_eq!(oracle.result, direct);
        assert_eq!(oracle.selected, 0);
    }

    #[test]
    fn empty_list_rejected() {
        let reference = AltNetwork::from_words(&["A"]);
        assert!(oracle_score_nbest(&reference, &nb(&[]), &CostModel::default()).is_err());
    }

    #[test]
    fn single_slot_network_equals_nbest_oracle() {
        let reference = AltNetwork::from_words(&["A", "B", "C"]);
        let list = nb(&[(&["A", "C"], 0.0), (&["A", "B", "C"], 0.5), (&["X"], 1.0)]);
        let oracle = oracle_score_nbest(&reference, &list, &CostModel::default()).unwrap();
        let network = oracle_score_network(
            &reference,
            &network_from_nbest(&list),
            &CostModel::default(),
        )
        .unwrap();
        assert_eq!(
            oracle.result.primary_cost(&CostModel::default()),
            network.primary_cost(&CostModel::default())
        );
    }

    #[test]
    fn curve_is_monotone_on_simple_doc() {
        let reference = AltNetwork::from_words(&["A", "B"]);
        let doc = PhraseAlternativesDoc {
            positions: vec![
                PhrasePosition {
                    start_frame: 0,
                    end_frame: 10,
                    alternatives: vec![
                        PhraseAlt { words: vec!["X".into()], score: 0.0 },
                        PhraseAlt { words: vec!["A".into()], score: 1.0 },
                    ],
                },
                PhrasePosition {
                    start_frame: 10,
                    end_frame: 20,
                    alternatives: vec![PhraseAlt { words: vec!["B".into()], score: 0.0 }],
                },
            ],
        };
        let points = oracle_curve(
            &reference,
            &doc,
            &[1, 2],
            &CostModel::default(),
            "r",
            "A",
            0.01,
        )
        .unwrap();
        assert_eq!(points[0].result.errors(), 1);
        assert_eq!(points[1].result.errors(), 0);
        assert_eq!(points[1].depths.max, 2);
        assert!(points[0].serialized_bytes > 0);
    }
}
