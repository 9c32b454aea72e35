//! Minimum-cost alignment of a reference network against a hypothesis
//! network, and the WER/precision/recall metrics computed from its counts.
//!
//! Both networks are compiled to small acyclic word graphs (epsilon edges
//! stand for empty alternatives and optional-word skips) and aligned by a
//! shortest-path search over the product graph. The primary cost is the
//! weighted error count; the secondary cost is the sum of chosen alternative
//! ranks, so the as-written (rank 0) form wins ties. Among paths equal in
//! both components the first one found in a fixed left-to-right scan is kept,
//! making repeated alignments byte-identical.

use crate::error::{Error, Result};
use crate::network::AltNetwork;

/// Edit costs. Correct words cost zero; counts, not costs, feed the metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostModel {
    pub substitution: u64,
    pub insertion: u64,
    pub deletion: u64,
}

impl Default for CostModel {
    /// The classic SCTK weights.
    fn default() -> CostModel {
        CostModel {
            substitution: 4,
            insertion: 3,
            deletion: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Correct,
    Substitution,
    Deletion,
    Insertion,
}

/// One word-level step of the optimal path.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedWord {
    pub verdict: Verdict,
    pub ref_word: Option<String>,
    pub hyp_word: Option<String>,
    pub ref_slot: Option<usize>,
    pub hyp_slot: Option<usize>,
}

/// Counts and path of an optimal alignment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlignmentResult {
    pub correct: u64,
    pub substituted: u64,
    pub deleted: u64,
    pub inserted: u64,
    /// Words on the chosen reference path: correct + deleted + substituted.
    /// Skipped optional words and empty alternatives do not count.
    pub ref_length: u64,
    pub path: Vec<AlignedWord>,
    /// Chosen alternative rank per reference slot.
    pub ref_choices: Vec<usize>,
    /// Chosen alternative rank per hypothesis slot.
    pub hyp_choices: Vec<usize>,
}

impl AlignmentResult {
    pub fn errors(&self) -> u64 {
        self.substituted + self.deleted + self.inserted
    }

    pub fn primary_cost(&self, costs: &CostModel) -> u64 {
        costs.substitution * self.substituted
            + costs.insertion * self.inserted
            + costs.deletion * self.deleted
    }

    pub fn rank_cost(&self) -> u64 {
        self.ref_choices.iter().map(|&r| r as u64).sum::<u64>()
            + self.hyp_choices.iter().map(|&r| r as u64).sum::<u64>()
    }

    /// Hypothesis words on the chosen path.
    pub fn hyp_length(&self) -> u64 {
        self.correct + self.substituted + self.inserted
    }
}

/// WER is a percentage; precision and recall are ratios in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub wer: f64,
    pub precision: f64,
    pub recall: f64,
}

impl Metrics {
    /// Degenerate denominators: an empty hypothesis path has precision 1.0,
    /// an empty reference path has recall 1.0 and, when nothing was
    /// inserted, WER 0.0 (insertions against an empty reference yield an
    /// infinite WER).
    pub fn from_counts(correct: u64, substituted: u64, deleted: u64, inserted: u64) -> Metrics {
        let ref_len = correct + deleted + substituted;
        let hyp_len = correct + inserted + substituted;
        let wer = if ref_len > 0 {
            100.0 * (inserted + deleted + substituted) as f64 / ref_len as f64
        } else if inserted > 0 {
            f64::INFINITY
        } else {
            0.0
        };
        let precision = if hyp_len > 0 {
            correct as f64 / hyp_len as f64
        } else {
            1.0
        };
        let recall = if ref_len > 0 {
            correct as f64 / ref_len as f64
        } else {
            1.0
        };
        Metrics {
            wer,
            precision,
            recall,
        }
    }
}

pub fn compute_metrics(result: &AlignmentResult) -> Metrics {
    Metrics::from_counts(
        result.correct,
        result.substituted,
        result.deleted,
        result.inserted,
    )
}

/// Micro-average: counts are summed across results before applying the
/// metric formulas.
pub fn aggregate(results: &[AlignmentResult]) -> Result<Metrics> {
    if results.is_empty() {
        return Err(Error::EmptyInput("no alignment results to aggregate".into()));
    }
    let (mut c, mut s, mut d, mut i) = (0, 0, 0, 0);
    for r in results {
        c += r.correct;
        s += r.substituted;
        d += r.deleted;
        i += r.inserted;
    }
    Ok(Metrics::from_counts(c, s, d, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EdgeMeta {
    /// Selects alternative `alt` of `slot`; charges the rank as secondary cost.
    Entry { slot: usize, alt: usize },
    Word { slot: usize },
    /// Zero-cost skip of an optional word.
    Bypass,
}

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    word: Option<String>,
    rank_cost: u64,
    meta: EdgeMeta,
}

struct Compiled {
    nodes: usize,
    out: Vec<Vec<Edge>>,
    slot_count: usize,
}

fn compile(net: &AltNetwork) -> Result<Compiled> {
    if !net.is_flat() {
        return Err(Error::NestedAlternatives);
    }
    let mut out: Vec<Vec<Edge>> = vec![Vec::new()];
    let alloc = |out: &mut Vec<Vec<Edge>>| {
        out.push(Vec::new());
        out.len() - 1
    };
    let mut slot_start = 0usize;
    for (s, slot) in net.slots.iter().enumerate() {
        let mut chains: Vec<Vec<usize>> = Vec::with_capacity(slot.alternatives.len());
        for alt in &slot.alternatives {
            let k = alt.items.len();
            chains.push((0..k).map(|_| alloc(&mut out)).collect());
        }
        let slot_end = alloc(&mut out);
        for (r, alt) in slot.alternatives.iter().enumerate() {
            let chain = &chains[r];
            let entry_to = *chain.first().unwrap_or(&slot_end);
            out[slot_start].push(Edge {
                to: entry_to,
                word: None,
                rank_cost: r as u64,
                meta: EdgeMeta::Entry { slot: s, alt: r },
            });
            let words = alt.words();
            for (i, w) in words.iter().enumerate() {
                let from = chain[i];
                let to = chain.get(i + 1).copied().unwrap_or(slot_end);
                out[from].push(Edge {
                    to,
                    word: Some(w.surface.clone()),
                    rank_cost: 0,
                    meta: EdgeMeta::Word { slot: s },
                });
                if w.optional {
                    out[from].push(Edge {
                        to,
                        word: None,
                        rank_cost: 0,
                        meta: EdgeMeta::Bypass,
                    });
                }
            }
        }
        slot_start = slot_end;
    }
    Ok(Compiled {
        nodes: out.len(),
        out,
        slot_count: net.slots.len(),
    })
}

const INF: (u64, u64) = (u64::MAX, u64::MAX);

#[derive(Clone, Copy)]
struct Back {
    prev: usize,
    ref_edge: Option<(usize, usize)>,
    hyp_edge: Option<(usize, usize)>,
}

/// Align a flat reference network against a flat hypothesis network,
/// returning the path that minimizes the weighted error cost, breaking ties
/// by the sum of chosen alternative ranks.
pub fn align(
    reference: &AltNetwork,
    hypothesis: &AltNetwork,
    costs: &CostModel,
) -> Result<AlignmentResult> {
    let rg = compile(reference)?;
    let hg = compile(hypothesis)?;
    let (rn, hn) = (rg.nodes, hg.nodes);
    let idx = |i: usize, j: usize| i * hn + j;
    let mut cost = vec![INF; rn * hn];
    let mut back: Vec<Option<Back>> = vec![None; rn * hn];
    cost[0] = (0, 0);

    for i in 0..rn {
        for j in 0..hn {
            let here = cost[idx(i, j)];
            if here == INF {
                continue;
            }
            let relax = |cost: &mut Vec<(u64, u64)>,
                             back: &mut Vec<Option<Back>>,
                             ti: usize,
                             tj: usize,
                             add: (u64, u64),
                             re: Option<(usize, usize)>,
                             he: Option<(usize, usize)>| {
                let next = (here.0 + add.0, here.1 + add.1);
                let slot = idx(ti, tj);
                if next < cost[slot] {
                    cost[slot] = next;
                    back[slot] = Some(Back {
                        prev: idx(i, j),
                        ref_edge: re,
                        hyp_edge: he,
                    });
                }
            };
            for (rei, re) in rg.out[i].iter().enumerate() {
                match &re.word {
                    None => relax(
                        &mut cost,
                        &mut back,
                        re.to,
                        j,
                        (0, re.rank_cost),
                        Some((i, rei)),
                        None,
                    ),
                    Some(rw) => {
                        relax(
                            &mut cost,
                            &mut back,
                            re.to,
                            j,
                            (costs.deletion, 0),
                            Some((i, rei)),
                            None,
                        );
                        for (hei, he) in hg.out[j].iter().enumerate() {
                            if let Some(hw) = &he.word {
                                let step = if rw == hw { 0 } else { costs.substitution };
                                relax(
                                    &mut cost,
                                    &mut back,
                                    re.to,
                                    he.to,
                                    (step, 0),
                                    Some((i, rei)),
                                    Some((j, hei)),
                                );
                            }
                        }
                    }
                }
            }
            for (hei, he) in hg.out[j].iter().enumerate() {
                let add = match &he.word {
                    None => (0, he.rank_cost),
                    Some(_) => (costs.insertion, 0),
                };
                relax(&mut cost, &mut back, i, he.to, add, None, Some((j, hei)));
            }
        }
    }

    let goal = idx(rn - 1, hn - 1);
    if cost[goal] == INF {
        return Err(Error::Internal("alignment found no path".into()));
    }

    let mut result = AlignmentResult {
        ref_choices: vec![0; rg.slot_count],
        hyp_choices: vec![0; hg.slot_count],
        ..AlignmentResult::default()
    };
    let mut steps = Vec::new();
    let mut at = goal;
    while at != 0 {
        let b = back[at].expect("backpointer chain broken");
        let re = b.ref_edge.map(|(n, e)| &rg.out[n][e]);
        let he = b.hyp_edge.map(|(n, e)| &hg.out[n][e]);
        if let Some(e) = re {
            if let EdgeMeta::Entry { slot, alt } = e.meta {
                result.ref_choices[slot] = alt;
            }
        }
        if let Some(e) = he {
            if let EdgeMeta::Entry { slot, alt } = e.meta {
                result.hyp_choices[slot] = alt;
            }
        }
        let ref_word = re.and_then(|e| e.word.clone());
        let hyp_word = he.and_then(|e| e.word.clone());
        let ref_slot = re.and_then(|e| match e.meta {
            EdgeMeta::Word { slot } => Some(slot),
            _ => None,
        });
        let hyp_slot = he.and_then(|e| match e.meta {
            EdgeMeta::Word { slot } => Some(slot),
            _ => None,
        });
        match (&ref_word, &hyp_word) {
            (Some(r), Some(h)) => {
                let verdict = if r == h {
                    result.correct += 1;
                    Verdict::Correct
                } else {
                    result.substituted += 1;
                    Verdict::Substitution
                };
                steps.push(AlignedWord {
                    verdict,
                    ref_word,
                    hyp_word,
                    ref_slot,
                    hyp_slot,
                });
            }
            (Some(_), None) => {
                result.deleted += 1;
                steps.push(AlignedWord {
                    verdict: Verdict::Deletion,
                    ref_word,
                    hyp_word: None,
                    ref_slot,
                    hyp_slot: None,
                });
            }
            (None, Some(_)) => {
                result.inserted += 1;
                steps.push(AlignedWord {
                    verdict: Verdict::Insertion,
                    ref_word: None,
                    hyp_word,
                    ref_slot: None,
                    hyp_slot,
                });
            }
            (None, None) => {}
        }
        at = b.prev;
    }
    steps.reverse();
    result.path = steps;
    result.ref_length = result.correct + result.deleted + result.substituted;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Alternative, Slot};

    fn slot(alts: &[&[&str]]) -> Slot {
        Slot {
            alternatives: alts.iter().map(|a| Alternative::from_words(a)).collect(),
        }
    }

    fn net(slots: &[&[&[&str]]]) -> AltNetwork {
        AltNetwork {
            slots: slots.iter().map(|s| slot(s)).collect(),
        }
    }

    #[test]
    fn alternation_scores_one_match() {
        let reference = net(&[&[&["I'M"], &["I", "AM"]]]);
        let hypothesis = net(&[&[&["I'M"]]]);
        let r = align(&reference, &hypothesis, &CostModel::default()).unwrap();
        assert_eq!((r.correct, r.errors()), (1, 0));
        assert_eq!(r.ref_choices, vec![0]);
    }

    #[test]
    fn optional_slot_against_empty_hypothesis() {
        let reference = net(&[&[&["%HESITATION"], &[]]]);
        let hypothesis = AltNetwork::new();
        let r = align(&reference, &hypothesis, &CostModel::default()).unwrap();
        assert_eq!(r.correct + r.substituted + r.deleted + r.inserted, 0);
        assert_eq!(r.ref_length, 0);
        assert_eq!(r.ref_choices, vec![1]);
    }

    #[test]
    fn identity_alignment() {
        let reference = AltNetwork::from_words(&["A", "B", "C"]);
        let r = align(&reference, &reference.clone(), &CostModel::default()).unwrap();
        assert_eq!(r.correct, 3);
        assert_eq!(r.errors(), 0);
        assert_eq!(r.path.len(), 3);
    }

    #[test]
    fn insertions_around_match() {
        let reference = AltNetwork::from_words(&["A", "B"]);
        let hypothesis = AltNetwork::from_words(&["X", "A", "B", "Y"]);
        let r = align(&reference, &hypothesis, &CostModel::default()).unwrap();
        assert_eq!((r.correct, r.inserted, r.substituted, r.deleted), (2, 2, 0, 0));
    }

    #[test]
    fn as_written_form_wins_ties() {
        let reference = net(&[&[&["I'M"], &["I", "AM"]]]);
        let hypothesis = net(&[&[&["I'M"], &["I", "AM"]]]);
        let r = align(&reference, &hypothesis, &CostModel::default()).unwrap();
        assert_eq!(r.correct, 1);
        assert_eq!(r.ref_choices, vec![0]);
        assert_eq!(r.hyp_choices, vec![0]);
    }

    #[test]
    fn nested_network_rejected() {
        use crate::network::{AltItem, NetWord};
        let mut reference = AltNetwork::from_words(&["A"]);
        reference.slots[0].alternatives[0]
            .items
            .push(AltItem::Group(vec![Alternative {
                items: vec![AltItem::Word(NetWord::new("B"))],
            }]));
        let err = align(&reference, &AltNetwork::new(), &CostModel::default()).unwrap_err();
        assert!(matches!(err, Error::NestedAlternatives));
    }

    #[test]
    fn metrics_formulas() {
        let m = Metrics::from_counts(3, 1, 1, 1);
        assert!((m.wer - 60.0).abs() < 1e-12);
        assert!((m.precision - 0.6).abs() < 1e-12);
        assert!((m.recall - 0.6).abs() < 1e-12);

        let m = Metrics::from_counts(0, 0, 4, 0);
        assert_eq!(m.wer, 100.0);
        assert_eq!(m.precision, 1.0);
        assert_eq!(m.recall, 0.0);

        let m = Metrics::from_counts(5, 0, 0, 0);
        assert_eq!((m.wer, m.precision, m.recall), (0.0, 1.0, 1.0));
    }

    #[test]
    fn aggregate_micro_averages() {
        let a = AlignmentResult {
            correct: 1,
            ref_length: 1,
            ..Default::default()
        };
        let b = AlignmentResult {
            correct: 1,
            substituted: 1,
            ref_length: 2,
            ..Default::default()
        };
        let m = aggregate(&[a.clone(), b.clone()]).unwrap();
        assert!((m.wer - 100.0 / 3.0).abs() < 1e-9);
        let single = aggregate(&[b.clone()]).unwrap();
        assert_eq!(single, compute_metrics(&b));
        let perfect = aggregate(&[a.clone(), a]).unwrap();
        assert_eq!(perfect.wer, 0.0);
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn optional_word_inside_longer_alternative() {
        use crate::network::{AltItem, NetWord};
        let mut reference = AltNetwork::from_words(&["A", "B"]);
        reference.slots[0].alternatives[0].items = vec![
            AltItem::Word(NetWord::optional("A")),
            AltItem::Word(NetWord::new("X")),
        ];
        // Reference sequence is (A) X B; hypothesis X B skips A for free.
        let hypothesis = AltNetwork::from_words(&["X", "B"]);
        let r = align(&reference, &hypothesis, &CostModel::default()).unwrap();
        assert_eq!(r.errors(), 0);
        assert_eq!(r.ref_length, 2);
    }
}
