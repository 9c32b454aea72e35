//! Independent oracles: brute-force enumeration and textbook edit distance,
//! deliberately kept apart from the library's alignment and search paths.

#![allow(dead_code)]

use std::collections::HashMap;

use altscore_core::align::CostModel;
use altscore_core::formats::{Lattice, PhraseAlternativesDoc};
use altscore_core::lattice_ops::SilenceSet;
use altscore_core::network::{AltItem, AltNetwork};

/// Classic weighted edit distance between two plain word sequences.
pub fn levenshtein_cost(reference: &[String], hypothesis: &[String], costs: &CostModel) -> u64 {
    let n = reference.len();
    let m = hypothesis.len();
    let mut dp = vec![vec![0u64; m + 1]; n + 1];
    for i in 1..=n {
        dp[i][0] = dp[i - 1][0] + costs.deletion;
    }
    for j in 1..=m {
        dp[0][j] = dp[0][j - 1] + costs.insertion;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = if reference[i - 1] == hypothesis[j - 1] {
                0
            } else {
                costs.substitution
            };
            dp[i][j] = (dp[i - 1][j] + costs.deletion)
                .min(dp[i][j - 1] + costs.insertion)
                .min(dp[i - 1][j - 1] + sub);
        }
    }
    dp[n][m]
}

/// Every expanded word sequence of one alternative: optional words may be
/// kept or skipped.
fn expand_alternative(items: &[AltItem]) -> Vec<Vec<String>> {
    let mut seqs = vec![Vec::new()];
    for item in items {
        match item {
            AltItem::Word(w) => {
                if w.optional {
                    let mut doubled = Vec::with_capacity(seqs.len() * 2);
                    for s in &seqs {
                        doubled.push(s.clone());
                        let mut kept = s.clone();
                        kept.push(w.surface.clone());
                        doubled.push(kept);
                    }
                    seqs = doubled;
                } else {
                    for s in &mut seqs {
                        s.push(w.surface.clone());
                    }
                }
            }
            AltItem::Group(_) => panic!("enumeration oracle expects flat networks"),
        }
    }
    seqs
}

/// Every expanded word sequence through the network.
pub fn expand_network(net: &AltNetwork) -> Vec<Vec<String>> {
    let mut seqs: Vec<Vec<String>> = vec![Vec::new()];
    for slot in &net.slots {
        let mut slot_seqs = Vec::new();
        for alt in &slot.alternatives {
            slot_seqs.extend(expand_alternative(&alt.items));
        }
        let mut next = Vec::with_capacity(seqs.len() * slot_seqs.len());
        for prefix in &seqs {
            for suffix in &slot_seqs {
                let mut s = prefix.clone();
                s.extend(suffix.iter().cloned());
                next.push(s);
            }
        }
        seqs = next;
    }
    seqs
}

/// Minimum alignment cost over the full cross product of expanded reference
/// and hypothesis paths.
pub fn brute_force_min_cost(
    reference: &AltNetwork,
    hypothesis: &AltNetwork,
    costs: &CostModel,
) -> u64 {
    let refs = expand_network(reference);
    let hyps = expand_network(hypothesis);
    let mut best = u64::MAX;
    for r in &refs {
        for h in &hyps {
            best = best.min(levenshtein_cost(r, h, costs));
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct PathInfo {
    pub arcs: Vec<usize>,
    pub words: Vec<String>,
    /// Total weight including the final weight.
    pub weight: f64,
}

/// Depth-first enumeration of all start-to-final paths.
pub fn enumerate_paths(lat: &Lattice, silence: &SilenceSet) -> Vec<PathInfo> {
    let out = lat.out_arcs();
    let mut paths = Vec::new();
    let mut arcs = Vec::new();
    let mut words = Vec::new();
    fn go(
        lat: &Lattice,
        out: &[Vec<usize>],
        silence: &SilenceSet,
        state: usize,
        weight: f64,
        arcs: &mut Vec<usize>,
        words: &mut Vec<String>,
        paths: &mut Vec<PathInfo>,
    ) {
        if let Some(fw) = lat.final_weight(state) {
            paths.push(PathInfo {
                arcs: arcs.clone(),
                words: words.clone(),
                weight: weight + fw,
            });
        }
        for &ai in &out[state] {
            let arc = &lat.arcs[ai];
            arcs.push(ai);
            let pushed = !silence.is_silence(&arc.label);
            if pushed {
                words.push(arc.label.clone());
            }
            go(lat, out, silence, arc.to, weight + arc.weight, arcs, words, paths);
            arcs.pop();
            if pushed {
                words.pop();
            }
        }
    }
    go(
        lat,
        &out,
        silence,
        lat.start,
        0.0,
        &mut arcs,
        &mut words,
        &mut paths,
    );
    paths
}

/// Distinct word sequences mapped to their minimal total weight.
pub fn sequence_weights(paths: &[PathInfo]) -> HashMap<Vec<String>, f64> {
    let mut map: HashMap<Vec<String>, f64> = HashMap::new();
    for p in paths {
        map.entry(p.words.clone())
            .and_modify(|w| *w = w.min(p.weight))
            .or_insert(p.weight);
    }
    map
}

/// Arc posteriors by explicit path enumeration.
pub fn posterior_oracle(lat: &Lattice) -> Vec<f64> {
    let paths = enumerate_paths(lat, &SilenceSet::from_labels::<&str>(&[]));
    let mut total = 0.0;
    let mut mass = vec![0.0; lat.arcs.len()];
    for p in &paths {
        let prob = (-p.weight).exp();
        total += prob;
        for &ai in &p.arcs {
            mass[ai] += prob;
        }
    }
    mass.iter().map(|m| m / total).collect()
}

/// Whether `seq` can be split into one alternative per position, in order.
pub fn in_cross_product(doc: &PhraseAlternativesDoc, seq: &[String]) -> bool {
    let mut reach = vec![false; seq.len() + 1];
    reach[0] = true;
    for pos in &doc.positions {
        let mut next = vec![false; seq.len() + 1];
        for (j, ok) in reach.iter().enumerate() {
            if !ok {
                continue;
            }
            for alt in &pos.alternatives {
                let k = alt.words.len();
                if j + k <= seq.len() && seq[j..j + k] == alt.words[..] {
                    next[j + k] = true;
                }
            }
        }
        reach = next;
    }
    reach[seq.len()]
}

/// The full concatenation cross-product language of a document. Only for
/// small fixtures.
pub fn cross_product_language(doc: &PhraseAlternativesDoc) -> Vec<Vec<String>> {
    let mut seqs: Vec<Vec<String>> = vec![Vec::new()];
    for pos in &doc.positions {
        let mut next = Vec::new();
        for prefix in &seqs {
            for alt in &pos.alternatives {
                let mut s = prefix.clone();
                s.extend(alt.words.iter().cloned());
                if !next.contains(&s) {
                    next.push(s);
                }
            }
        }
        seqs = next;
    }
    seqs
}
