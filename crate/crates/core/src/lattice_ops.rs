//! Graph operations over word lattices: trimming, arc posteriors, n-best
//! enumeration, phrase-boundary detection, and the derivation of phrase- and
//! word-level alternatives.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::formats::{
    Lattice, PhraseAlt, PhraseAlternativesDoc, PhrasePosition, WordAltsDoc, EPSILON_LABEL,
};

/// Labels treated as non-words: ignored for boundary detection and dropped
/// from output sequences. Matching is case-insensitive.
#[derive(Debug, Clone)]
pub struct SilenceSet(HashSet<String>);

impl Default for SilenceSet {
    fn default() -> SilenceSet {
        SilenceSet(
            ["<sil>", "<eps>", "!SIL"]
                .iter()
                .map(|s| s.to_ascii_uppercase())
                .collect(),
        )
    }
}

impl SilenceSet {
    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> SilenceSet {
        SilenceSet(
            labels
                .iter()
                .map(|s| s.as_ref().to_ascii_uppercase())
                .collect(),
        )
    }

    pub fn is_silence(&self, label: &str) -> bool {
        self.0.contains(&label.to_ascii_uppercase())
    }
}

/// Arc posteriors, indexed like `Lattice::arcs`.
#[derive(Debug, Clone)]
pub struct ArcPosterior(pub Vec<f64>);

fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn accessibility(lat: &Lattice) -> (Vec<bool>, Vec<bool>) {
    let n = lat.num_states();
    let out = lat.out_arcs();
    let inc = lat.in_arcs();
    let mut forward = vec![false; n];
    let mut stack = vec![lat.start];
    forward[lat.start] = true;
    while let Some(s) = stack.pop() {
        for &ai in &out[s] {
            let t = lat.arcs[ai].to;
            if !forward[t] {
                forward[t] = true;
                stack.push(t);
            }
        }
    }
    let mut backward = vec![false; n];
    let mut stack: Vec<usize> = lat.finals.iter().map(|(s, _)| *s).collect();
    for &s in &stack {
        backward[s] = true;
    }
    while let Some(s) = stack.pop() {
        for &ai in &inc[s] {
            let f = lat.arcs[ai].from;
            if !backward[f] {
                backward[f] = true;
                stack.push(f);
            }
        }
    }
    (forward, backward)
}

/// Remove arcs and final weights not on a start-to-final path. State ids are
/// preserved. Fails when no such path exists at all.
pub fn connect(lat: &Lattice) -> Result<Lattice> {
    let (forward, backward) = accessibility(lat);
    if !backward[lat.start] || !forward[lat.start] {
        return Err(Error::Disconnected {
            msg: "no path from the start state to any final state".into(),
        });
    }
    let live = |s: usize| forward[s] && backward[s];
    Ok(Lattice {
        start: lat.start,
        arcs: lat
            .arcs
            .iter()
            .filter(|a| live(a.from) && live(a.to))
            .cloned()
            .collect(),
        finals: lat
            .finals
            .iter()
            .filter(|(s, _)| live(*s))
            .cloned()
            .collect(),
    })
}

fn require_connected(lat: &Lattice) -> Result<()> {
    let (forward, backward) = accessibility(lat);
    if !backward[lat.start] {
        return Err(Error::Disconnected {
            msg: "no path from the start state to any final state".into(),
        });
    }
    for a in &lat.arcs {
        if !(forward[a.from] && backward[a.from] && forward[a.to] && backward[a.to]) {
            return Err(Error::Disconnected {
                msg: format!("arc {} -> {} lies off every start-to-final path", a.from, a.to),
            });
        }
    }
    for (s, _) in &lat.finals {
        if !forward[*s] {
            return Err(Error::Disconnected {
                msg: format!("final state {s} is unreachable"),
            });
        }
    }
    Ok(())
}

/// Forward-backward arc posteriors under log-sum-exp semantics. Arc weights
/// and final weights are negative log probabilities.
pub fn forward_backward(lat: &Lattice) -> Result<ArcPosterior> {
    require_connected(lat)?;
    let order = lat.topo_order()?;
    let n = lat.num_states();
    let out = lat.out_arcs();
    let mut alpha = vec![f64::NEG_INFINITY; n];
    alpha[lat.start] = 0.0;
    for &s in &order {
        if alpha[s] == f64::NEG_INFINITY {
            continue;
        }
        for &ai in &out[s] {
            let a = &lat.arcs[ai];
            alpha[a.to] = logaddexp(alpha[a.to], alpha[s] - a.weight);
        }
    }
    let mut beta = vec![f64::NEG_INFINITY; n];
    for (s, w) in &lat.finals {
        beta[*s] = logaddexp(beta[*s], -w);
    }
    for &s in order.iter().rev() {
        for &ai in &out[s] {
            let a = &lat.arcs[ai];
            beta[s] = logaddexp(beta[s], -a.weight + beta[a.to]);
        }
    }
    let total = beta[lat.start];
    if total == f64::NEG_INFINITY {
        return Err(Error::Disconnected {
            msg: "total probability mass is zero".into(),
        });
    }
    let probs = lat
        .arcs
        .iter()
        .map(|a| (alpha[a.from] - a.weight + beta[a.to] - total).exp())
        .collect();
    Ok(ArcPosterior(probs))
}

/// One enumerated word sequence with its best total path weight.
#[derive(Debug, Clone, PartialEq)]
pub struct NBestEntry {
    pub words: Vec<String>,
    pub weight: f64,
}

/// Ranked distinct word sequences; weights are non-decreasing with rank.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NBestList {
    pub entries: Vec<NBestEntry>,
}

impl NBestList {
    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    /// Encode as a single-position alternatives document spanning the
    /// utterance.
    pub fn to_phrase_doc(&self, start_frame: u32, end_frame: u32) -> PhraseAlternativesDoc {
        PhraseAlternativesDoc {
            positions: vec![PhrasePosition {
                start_frame,
                end_frame,
                alternatives: self
                    .entries
                    .iter()
                    .map(|e| PhraseAlt {
                        words: e.words.clone(),
                        score: e.weight,
                    })
                    .collect(),
            }],
        }
    }
}

struct HeapItem {
    priority: f64,
    counter: u64,
    state: Option<usize>,
    weight: f64,
    words: Vec<String>,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority && self.counter == other.counter
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    // Reversed so BinaryHeap pops the smallest (priority, counter) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .priority
            .total_cmp(&self.priority)
            .then(other.counter.cmp(&self.counter))
    }
}

// Generous guard against degenerate blowup during distinct-sequence search.
const MAX_POPS: usize = 4_000_000;

/// Enumerate the `n` lowest-weight distinct word sequences. Silence and
/// epsilon labels are dropped from sequences; fewer than `n` entries are
/// returned when the lattice admits fewer distinct sequences. Paths are
/// explored best-first with an exact cost-to-final heuristic, so sequences
/// arrive in non-decreasing weight order and ties resolve deterministically
/// by discovery order.
pub fn nbest(lat: &Lattice, n: usize, silence: &SilenceSet) -> Result<NBestList> {
    if n == 0 {
        return Err(Error::InvalidArgument("nbest requires n >= 1".into()));
    }
    let order = lat.topo_order()?;
    let states = lat.num_states();
    let out = lat.out_arcs();
    // Exact remaining cost per state, tropical semiring.
    let mut to_final = vec![f64::INFINITY; states];
    for (s, w) in &lat.finals {
        to_final[*s] = to_final[*s].min(*w);
    }
    for &s in order.iter().rev() {
        for &ai in &out[s] {
            let a = &lat.arcs[ai];
            to_final[s] = to_final[s].min(a.weight + to_final[a.to]);
        }
    }
    if to_final[lat.start] == f64::INFINITY {
        return Err(Error::Disconnected {
            msg: "no path from the start state to any final state".into(),
        });
    }

    let mut heap = BinaryHeap::new();
    let mut counter = 0u64;
    heap.push(HeapItem {
        priority: to_final[lat.start],
        counter,
        state: Some(lat.start),
        weight: 0.0,
        words: Vec::new(),
    });
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    let mut entries = Vec::new();
    let mut pops = 0usize;
    while let Some(item) = heap.pop() {
        pops += 1;
        if pops > MAX_POPS {
            break;
        }
        match item.state {
            None => {
                if seen.insert(item.words.clone()) {
                    entries.push(NBestEntry {
                        words: item.words,
                        weight: item.weight,
                    });
                    if entries.len() == n {
                        break;
                    }
                }
            }
            Some(s) => {
                if let Some(fw) = lat.final_weight(s) {
                    counter += 1;
                    heap.push(HeapItem {
                        priority: item.weight + fw,
                        counter,
                        state: None,
                        weight: item.weight + fw,
                        words: item.words.clone(),
                    });
                }
                for &ai in &out[s] {
                    let a = &lat.arcs[ai];
                    if to_final[a.to] == f64::INFINITY {
                        continue;
                    }
                    let weight = item.weight + a.weight;
                    let mut words = item.words.clone();
                    if !silence.is_silence(&a.label) {
                        words.push(a.label.clone());
                    }
                    counter += 1;
                    heap.push(HeapItem {
                        priority: weight + to_final[a.to],
                        counter,
                        state: Some(a.to),
                        weight,
                        words,
                    });
                }
            }
        }
    }
    Ok(NBestList { entries })
}

/// Frames not crossed by any non-silence arc with posterior at or above the
/// threshold. Contiguous boundary frames collapse to their midpoint, except
/// that the lattice start and end frames are always boundaries.
pub fn detect_phrase_boundaries(
    lat: &Lattice,
    post: &ArcPosterior,
    threshold: f64,
    silence: &SilenceSet,
) -> Vec<u32> {
    if lat.arcs.is_empty() {
        return Vec::new();
    }
    let lo = lat.min_frame();
    let hi = lat.max_frame();
    let span = (hi - lo + 1) as usize;
    let mut blocked = vec![false; span];
    for (ai, a) in lat.arcs.iter().enumerate() {
        if silence.is_silence(&a.label) || post.0[ai] < threshold {
            continue;
        }
        // A frame t is crossed iff start_frame < t < end_frame.
        for t in a.start_frame + 1..a.end_frame {
            blocked[(t - lo) as usize] = true;
        }
    }
    let mut boundaries = Vec::new();
    let mut run_start: Option<u32> = None;
    for t in lo..=hi {
        let open = !blocked[(t - lo) as usize];
        if open && run_start.is_none() {
            run_start = Some(t);
        }
        let run_ends = run_start.is_some() && (!open || t == hi);
        if run_ends {
            let a = run_start.take().unwrap();
            let b = if open { t } else { t - 1 };
            if a == lo {
                boundaries.push(lo);
                if b == hi && b != lo {
                    boundaries.push(hi);
                }
            } else if b == hi {
                boundaries.push(hi);
            } else {
                boundaries.push(a + (b - a) / 2);
            }
        }
    }
    boundaries
}

/// Derive phrase alternatives between consecutive boundaries: arcs not wholly
/// inside an interval are label-masked to epsilon, then the n best distinct
/// sequences of the masked lattice (which removes epsilons and merges equal
/// sequences at their minimal weight) become that position's alternatives.
/// An empty sequence is kept as an explicit empty alternative.
pub fn phrase_alternatives(
    lat: &Lattice,
    boundaries: &[u32],
    n: usize,
    silence: &SilenceSet,
) -> Result<PhraseAlternativesDoc> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "phrase_alternatives requires n >= 1".into(),
        ));
    }
    let mut positions = Vec::new();
    for pair in boundaries.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let mut masked = lat.clone();
        for arc in &mut masked.arcs {
            if !(arc.start_frame >= a && arc.end_frame <= b) {
                arc.label = EPSILON_LABEL.to_string();
            }
        }
        let best = nbest(&masked, n, silence)?;
        positions.push(PhrasePosition {
            start_frame: a,
            end_frame: b,
            alternatives: best
                .entries
                .into_iter()
                .map(|e| PhraseAlt {
                    words: e.words,
                    score: e.weight,
                })
                .collect(),
        });
    }
    Ok(PhraseAlternativesDoc { positions })
}

/// Re-bin phrase alternatives into single-word positions. Each phrase
/// position contributes as many word positions as its rank-0 alternative has
/// words; longer alternatives are truncated and shorter ones padded with
/// empty alternatives. Deliberately lossy.
pub fn word_alternatives(doc: &PhraseAlternativesDoc) -> WordAltsDoc {
    let mut positions = Vec::new();
    for pos in &doc.positions {
        let k = pos.alternatives.first().map_or(0, |a| a.words.len());
        if k == 0 {
            continue;
        }
        let span = pos.end_frame - pos.start_frame;
        for i in 0..k {
            let start_frame = pos.start_frame + span * i as u32 / k as u32;
            let end_frame = pos.start_frame + span * (i as u32 + 1) / k as u32;
            let mut alternatives: Vec<PhraseAlt> = Vec::new();
            for alt in &pos.alternatives {
                let words = match alt.words.get(i) {
                    Some(w) => vec![w.clone()],
                    None => Vec::new(),
                };
                if !alternatives.iter().any(|a| a.words == words) {
                    alternatives.push(PhraseAlt {
                        words,
                        score: alt.score,
                    });
                }
            }
            positions.push(PhrasePosition {
                start_frame,
                end_frame,
                alternatives,
            });
        }
    }
    WordAltsDoc::new(PhraseAlternativesDoc { positions })
        .expect("word binning produced a multi-word alternative")
}

/// Maximum, 90th percentile, and median of per-unit alternative depths,
/// percentiles by nearest rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthStats {
    pub max: usize,
    pub p90: usize,
    pub p50: usize,
}

pub fn depth_stats(depths: &[usize]) -> Result<DepthStats> {
    if depths.is_empty() {
        return Err(Error::EmptyInput("no depths to summarize".into()));
    }
    let mut sorted = depths.to_vec();
    sorted.sort_unstable();
    // Nearest rank with integer arithmetic: rank = ceil(num * n / den).
    let nearest = |num: usize, den: usize| {
        let rank = (num * sorted.len()).div_ceil(den);
        sorted[rank - 1]
    };
    Ok(DepthStats {
        max: *sorted.last().unwrap(),
        p90: nearest(9, 10),
        p50: nearest(1, 2),
    })
}
