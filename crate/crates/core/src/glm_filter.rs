//! GLM normalization over reference and hypothesis streams.
//!
//! Rule application is longest-lhs-first, then file order, left to right,
//! non-overlapping, in a single pass: rule output is never rescanned.
//! Expansion rules rewrite in place (the legacy behavior that double-counts
//! matches); alternation rules open a slot of acceptable forms. Promoting
//! expansions to alternations with [`promote_expansions`] is the preferred
//! pipeline.

use std::collections::HashSet;

use crate::error::Result;
use crate::formats::{CtmAltBlock, CtmEntry, CtmToken, GlmRule, RuleKind, StmSegment};
use crate::network::{AltItem, AltNetwork, Alternative, NetWord, Slot};

/// How backchannel words ("UH-HUH") are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackchannelMode {
    /// Score them like any other word.
    #[default]
    Score,
    /// Reference backchannels become optional deletions.
    Optional,
    /// Additionally drop backchannels from hypotheses.
    Exclude,
}

/// Hesitation and backchannel word policy. The default word lists are
/// configuration, not constants; CLI flags can replace them from files.
#[derive(Debug, Clone)]
pub struct FilterPolicy {
    pub hesitation_words: HashSet<String>,
    pub backchannel_words: HashSet<String>,
    pub exclude_hyp_hesitations: bool,
    pub backchannel_mode: BackchannelMode,
}

const DEFAULT_HESITATIONS: &[&str] = &[
    "%HESITATION",
    "UH",
    "UM",
    "EH",
    "MM",
    "HM",
    "AH",
    "HUH",
    "HA",
    "ER",
    "OOF",
    "HEE",
    "ACH",
    "EEE",
    "EW",
];

const DEFAULT_BACKCHANNELS: &[&str] = &["UH-HUH", "UM-HUM", "MM-HMM", "MHM", "YEAH-HUH"];

impl Default for FilterPolicy {
    fn default() -> FilterPolicy {
        FilterPolicy {
            hesitation_words: DEFAULT_HESITATIONS.iter().map(|s| s.to_string()).collect(),
            backchannel_words: DEFAULT_BACKCHANNELS.iter().map(|s| s.to_string()).collect(),
            exclude_hyp_hesitations: false,
            backchannel_mode: BackchannelMode::Score,
        }
    }
}

impl FilterPolicy {
    /// Membership is checked hesitations first; a word on both lists counts
    /// as a hesitation.
    pub fn is_hesitation(&self, word: &str) -> bool {
        self.hesitation_words.contains(word)
    }

    pub fn is_backchannel(&self, word: &str) -> bool {
        !self.is_hesitation(word) && self.backchannel_words.contains(word)
    }
}

/// Parse a word-list file: one word per line, `;;` comments, uppercased.
pub fn parse_word_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with(";;"))
        .map(|l| l.to_ascii_uppercase())
        .collect()
}

/// Which side of the comparison a network belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Reference,
    Hypothesis,
}

/// Rewrite every expansion rule as an alternation listing the original form
/// first, so the as-written form wins alignment ties. Alternation rules pass
/// through; the operation is idempotent.
pub fn promote_expansions(rules: &[GlmRule]) -> Vec<GlmRule> {
    rules
        .iter()
        .map(|r| match r.kind {
            RuleKind::Alternation => r.clone(),
            RuleKind::Expansion => GlmRule {
                lhs: r.lhs.clone(),
                rhs: vec![r.lhs.clone(), r.rhs[0].clone()],
                kind: RuleKind::Alternation,
                annotation: r.annotation.clone(),
            },
        })
        .collect()
}

/// One element of a rule-matching segmentation.
enum MatchSeg {
    Plain(usize),
    Rule { start: usize, len: usize, rule: usize },
}

/// Longest-lhs-first, file-order, left-to-right, non-overlapping scan.
fn scan_matches(surfaces: &[String], rules: &[GlmRule]) -> Vec<MatchSeg> {
    let mut order: Vec<usize> = (0..rules.len()).collect();
    order.sort_by(|&a, &b| rules[b].lhs.len().cmp(&rules[a].lhs.len()).then(a.cmp(&b)));
    let mut segs = Vec::new();
    let mut i = 0;
    while i < surfaces.len() {
        let hit = order.iter().copied().find(|&r| {
            let lhs = &rules[r].lhs;
            surfaces.len() - i >= lhs.len() && surfaces[i..i + lhs.len()] == lhs[..]
        });
        match hit {
            Some(r) => {
                let len = rules[r].lhs.len();
                segs.push(MatchSeg::Rule { start: i, len, rule: r });
                i += len;
            }
            None => {
                segs.push(MatchSeg::Plain(i));
                i += 1;
            }
        }
    }
    segs
}

/// Build slots for one word sequence. `optional[i]` marks source words that
/// may be skipped; a slot whose source words are all optional gains an empty
/// alternative at the lowest rank.
fn apply_rules_to_words(
    surfaces: &[String],
    optional: &[bool],
    rules: &[GlmRule],
) -> Vec<Slot> {
    let mut slots = Vec::new();
    for seg in scan_matches(surfaces, rules) {
        match seg {
            MatchSeg::Plain(i) => {
                let mut slot = Slot {
                    alternatives: vec![Alternative::from_words(&[surfaces[i].as_str()])],
                };
                if optional[i] {
                    slot.ensure_empty_alternative();
                }
                slots.push(slot);
            }
            MatchSeg::Rule { start, len, rule } => {
                let all_optional = optional[start..start + len].iter().all(|&o| o);
                let r = &rules[rule];
                match r.kind {
                    RuleKind::Expansion => {
                        for w in &r.rhs[0] {
                            let word = if all_optional {
                                NetWord::optional(w.clone())
                            } else {
                                NetWord::new(w.clone())
                            };
                            slots.push(Slot::single_word(word));
                        }
                    }
                    RuleKind::Alternation => {
                        let mut alts: Vec<Alternative> = Vec::new();
                        for phrase in &r.rhs {
                            let alt = Alternative::from_words(phrase);
                            if !alts.contains(&alt) {
                                alts.push(alt);
                            }
                        }
                        let mut slot = Slot { alternatives: alts };
                        if all_optional {
                            slot.ensure_empty_alternative();
                        }
                        slots.push(slot);
                    }
                }
            }
        }
    }
    slots
}

/// Apply GLM rules to reference segments, one network per segment.
pub fn apply_glm_to_reference(segments: &[StmSegment], rules: &[GlmRule]) -> Vec<AltNetwork> {
    segments
        .iter()
        .map(|seg| {
            let surfaces: Vec<String> = seg.words.iter().map(|w| w.surface.clone()).collect();
            let optional: Vec<bool> = seg.words.iter().map(|w| w.optional_deletion).collect();
            AltNetwork {
                slots: apply_rules_to_words(&surfaces, &optional, rules),
            }
        })
        .collect()
}

/// Apply GLM rules to a hypothesis stream. Rules may span adjacent plain
/// tokens but never cross an ALT block boundary; inside a block each
/// alternative is rewritten independently and the nested result is flattened
/// by cartesian expansion.
pub fn apply_glm_to_hypothesis(stream: &[CtmEntry], rules: &[GlmRule]) -> AltNetwork {
    let mut slots = Vec::new();
    let mut run: Vec<String> = Vec::new();
    let flush = |run: &mut Vec<String>, slots: &mut Vec<Slot>| {
        if !run.is_empty() {
            let optional = vec![false; run.len()];
            slots.extend(apply_rules_to_words(run, &optional, rules));
            run.clear();
        }
    };
    for entry in stream {
        match entry {
            CtmEntry::Token(t) => run.push(t.surface.clone()),
            CtmEntry::Alt(block) => {
                flush(&mut run, &mut slots);
                slots.push(rewrite_block(block, rules));
            }
        }
    }
    flush(&mut run, &mut slots);
    flatten_nested_alts(&AltNetwork { slots })
}

/// Rewrite one ALT block into a (possibly nested) slot.
fn rewrite_block(block: &CtmAltBlock, rules: &[GlmRule]) -> Slot {
    let mut alternatives = Vec::new();
    for alt in &block.alternatives {
        let surfaces: Vec<String> = alt.iter().map(|t| t.surface.clone()).collect();
        let optional = vec![false; surfaces.len()];
        let mini = apply_rules_to_words(&surfaces, &optional, rules);
        // Inline single-alternative slots; keep real alternations as groups.
        let mut items = Vec::new();
        for slot in mini {
            if slot.alternatives.len() == 1 {
                items.extend(slot.alternatives.into_iter().next().unwrap().items);
            } else {
                items.push(AltItem::Group(slot.alternatives));
            }
        }
        alternatives.push(Alternative { items });
    }
    Slot { alternatives }
}

fn expand_alternative(alt: &Alternative) -> Vec<Vec<NetWord>> {
    let mut seqs: Vec<Vec<NetWord>> = vec![Vec::new()];
    for item in &alt.items {
        match item {
            AltItem::Word(w) => {
                for s in &mut seqs {
                    s.push(w.clone());
                }
            }
            AltItem::Group(group) => {
                let mut expanded_group = Vec::new();
                for member in group {
                    expanded_group.extend(expand_alternative(member));
                }
                let mut next = Vec::with_capacity(seqs.len() * expanded_group.len());
                for prefix in &seqs {
                    for suffix in &expanded_group {
                        let mut s = prefix.clone();
                        s.extend(suffix.iter().cloned());
                        next.push(s);
                    }
                }
                seqs = next;
            }
        }
    }
    seqs
}

/// Expand embedded alternations so every alternative is a plain word
/// sequence. Duplicates keep the lowest rank; idempotent.
pub fn flatten_nested_alts(network: &AltNetwork) -> AltNetwork {
    let slots = network
        .slots
        .iter()
        .map(|slot| {
            let mut seen: Vec<Vec<NetWord>> = Vec::new();
            for alt in &slot.alternatives {
                for seq in expand_alternative(alt) {
                    if !seen.contains(&seq) {
                        seen.push(seq);
                    }
                }
            }
            Slot {
                alternatives: seen
                    .into_iter()
                    .map(|words| Alternative {
                        items: words.into_iter().map(AltItem::Word).collect(),
                    })
                    .collect(),
            }
        })
        .collect();
    AltNetwork { slots }
}

/// Apply the hesitation/backchannel policy to a flat network.
///
/// Hypothesis side: hesitation words are dropped when
/// `exclude_hyp_hesitations`, backchannel words when the mode is `Exclude`;
/// slots whose alternatives all become empty are removed. Reference side:
/// slots offering a hesitation form always gain an empty alternative (the
/// NIST convention), slots offering a backchannel form gain one when the
/// mode is `Optional` or `Exclude`.
pub fn apply_policy(network: &AltNetwork, policy: &FilterPolicy, side: Side) -> AltNetwork {
    match side {
        Side::Hypothesis => {
            let drop_word = |w: &NetWord| {
                (policy.exclude_hyp_hesitations && policy.is_hesitation(&w.surface))
                    || (policy.backchannel_mode == BackchannelMode::Exclude
                        && policy.is_backchannel(&w.surface))
            };
            let mut slots = Vec::new();
            for slot in &network.slots {
                let mut alts: Vec<Alternative> = Vec::new();
                for alt in &slot.alternatives {
                    let kept = Alternative {
                        items: alt
                            .items
                            .iter()
                            .filter(|i| match i {
                                AltItem::Word(w) => !drop_word(w),
                                AltItem::Group(_) => true,
                            })
                            .cloned()
                            .collect(),
                    };
                    if !alts.contains(&kept) {
                        alts.push(kept);
                    }
                }
                if alts.iter().all(Alternative::is_empty) {
                    continue;
                }
                slots.push(Slot { alternatives: alts });
            }
            AltNetwork { slots }
        }
        Side::Reference => {
            let eligible = |w: &NetWord| {
                policy.is_hesitation(&w.surface)
                    || (policy.backchannel_mode != BackchannelMode::Score
                        && policy.is_backchannel(&w.surface))
            };
            let mut slots = network.slots.clone();
            for slot in &mut slots {
                let skippable = slot.alternatives.iter().any(|a| {
                    a.is_flat() && !a.is_empty() && a.words().iter().all(|w| eligible(w))
                });
                if skippable {
                    slot.ensure_empty_alternative();
                }
            }
            AltNetwork { slots }
        }
    }
}

/// Apply GLM rules and policy to a hypothesis CTM stream, producing a
/// filtered stream. Alternation matches become ALT blocks; expansion matches
/// rewrite tokens in place, splitting the matched time span evenly across
/// replacement words.
pub fn filter_ctm_entries(
    stream: &[CtmEntry],
    rules: &[GlmRule],
    policy: &FilterPolicy,
) -> Result<Vec<CtmEntry>> {
    let mut out = Vec::new();
    let mut run: Vec<CtmToken> = Vec::new();
    let flush = |run: &mut Vec<CtmToken>, out: &mut Vec<CtmEntry>| {
        if run.is_empty() {
            return;
        }
        let surfaces: Vec<String> = run.iter().map(|t| t.surface.clone()).collect();
        for seg in scan_matches(&surfaces, rules) {
            match seg {
                MatchSeg::Plain(i) => out.push(CtmEntry::Token(run[i].clone())),
                MatchSeg::Rule { start, len, rule } => {
                    let span = &run[start..start + len];
                    let r = &rules[rule];
                    match r.kind {
                        RuleKind::Expansion => {
                            for t in retime(span, &r.rhs[0]) {
                                out.push(CtmEntry::Token(t));
                            }
                        }
                        RuleKind::Alternation => {
                            out.push(CtmEntry::Alt(CtmAltBlock {
                                recording_id: span[0].recording_id.clone(),
                                channel: span[0].channel.clone(),
                                alternatives: r.rhs.iter().map(|p| retime(span, p)).collect(),
                            }));
                        }
                    }
                }
            }
        }
        run.clear();
    };
    for entry in stream {
        match entry {
            CtmEntry::Token(t) => run.push(t.clone()),
            CtmEntry::Alt(block) => {
                flush(&mut run, &mut out);
                out.push(CtmEntry::Alt(rewrite_block_tokens(block, rules)));
            }
        }
    }
    flush(&mut run, &mut out);
    Ok(apply_policy_to_entries(&out, policy))
}

/// Spread the time span of `span` evenly over `words`.
fn retime(span: &[CtmToken], words: &[String]) -> Vec<CtmToken> {
    let first = &span[0];
    let start = first.start;
    let end = span.last().map(|t| t.start + t.duration).unwrap_or(start);
    let total = (end - start).max(0.0);
    let k = words.len();
    words
        .iter()
        .enumerate()
        .map(|(i, w)| CtmToken {
            recording_id: first.recording_id.clone(),
            channel: first.channel.clone(),
            start: start + total * i as f64 / k as f64,
            duration: total / k as f64,
            surface: w.clone(),
            confidence: None,
        })
        .collect()
}

/// Apply rules inside an existing block, flattening nested results by
/// cartesian expansion at the token level.
fn rewrite_block_tokens(block: &CtmAltBlock, rules: &[GlmRule]) -> CtmAltBlock {
    let mut alternatives: Vec<Vec<CtmToken>> = Vec::new();
    for alt in &block.alternatives {
        let surfaces: Vec<String> = alt.iter().map(|t| t.surface.clone()).collect();
        let optional = vec![false; surfaces.len()];
        let mini = AltNetwork {
            slots: apply_rules_to_words(&surfaces, &optional, rules),
        };
        let flat = flatten_nested_alts(&mini);
        let mut seqs: Vec<Vec<String>> = vec![Vec::new()];
        for slot in &flat.slots {
            let mut next = Vec::new();
            for prefix in &seqs {
                for a in &slot.alternatives {
                    let mut s = prefix.clone();
                    s.extend(a.surfaces());
                    next.push(s);
                }
            }
            seqs = next;
        }
        for seq in seqs {
            let tokens = if alt.is_empty() {
                Vec::new()
            } else {
                retime(alt, &seq)
            };
            if !alternatives.contains(&tokens) {
                alternatives.push(tokens);
            }
        }
    }
    CtmAltBlock {
        recording_id: block.recording_id.clone(),
        channel: block.channel.clone(),
        alternatives,
    }
}

fn apply_policy_to_entries(entries: &[CtmEntry], policy: &FilterPolicy) -> Vec<CtmEntry> {
    let drop_word = |surface: &str| {
        (policy.exclude_hyp_hesitations && policy.is_hesitation(surface))
            || (policy.backchannel_mode == BackchannelMode::Exclude
                && policy.is_backchannel(surface))
    };
    let mut out = Vec::new();
    for entry in entries {
        match entry {
            CtmEntry::Token(t) => {
                if !drop_word(&t.surface) {
                    out.push(CtmEntry::Token(t.clone()));
                }
            }
            CtmEntry::Alt(b) => {
                let mut alternatives: Vec<Vec<CtmToken>> = Vec::new();
                for alt in &b.alternatives {
                    let kept: Vec<CtmToken> = alt
                        .iter()
                        .filter(|t| !drop_word(&t.surface))
                        .cloned()
                        .collect();
                    if !alternatives.contains(&kept) {
                        alternatives.push(kept);
                    }
                }
                if alternatives.iter().all(Vec::is_empty) {
                    continue;
                }
                out.push(CtmEntry::Alt(CtmAltBlock {
                    recording_id: b.recording_id.clone(),
                    channel: b.channel.clone(),
                    alternatives,
                }));
            }
        }
    }
    out
}

/// Apply GLM rules and policy to reference segments, producing filtered
/// segments. Alternation matches keep their rank-0 (as-written) form; words
/// a policy makes skippable are wrapped in optional-deletion parentheses.
pub fn filter_stm(
    segments: &[StmSegment],
    rules: &[GlmRule],
    policy: &FilterPolicy,
) -> Vec<StmSegment> {
    use crate::formats::RefWord;
    segments
        .iter()
        .map(|seg| {
            let surfaces: Vec<String> = seg.words.iter().map(|w| w.surface.clone()).collect();
            let mut words = Vec::new();
            for m in scan_matches(&surfaces, rules) {
                match m {
                    MatchSeg::Plain(i) => words.push(seg.words[i].clone()),
                    MatchSeg::Rule { start, len, rule } => {
                        let all_optional =
                            seg.words[start..start + len].iter().all(|w| w.optional_deletion);
                        let r = &rules[rule];
                        let replacement = &r.rhs[0];
                        for w in replacement {
                            words.push(RefWord::new(w.clone(), all_optional));
                        }
                    }
                }
            }
            for w in &mut words {
                let eligible = policy.is_hesitation(&w.surface)
                    || (policy.backchannel_mode != BackchannelMode::Score
                        && policy.is_backchannel(&w.surface));
                if eligible {
                    w.optional_deletion = true;
                }
            }
            StmSegment {
                words,
                ..seg.clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{parse_ctm, parse_glm, parse_stm};

    fn promoted_im_rule() -> Vec<GlmRule> {
        promote_expansions(&parse_glm("I'M => I AM\n").unwrap())
    }

    #[test]
    fn promote_lists_original_first() {
        let rules = promoted_im_rule();
        assert_eq!(rules[0].kind, RuleKind::Alternation);
        assert_eq!(
            rules[0].rhs,
            vec![vec!["I'M".to_string()], vec!["I".to_string(), "AM".to_string()]]
        );
    }

    #[test]
    fn promote_idempotent_and_empty() {
        let rules = promoted_im_rule();
        assert_eq!(promote_expansions(&rules), rules);
        assert!(promote_expansions(&[]).is_empty());
    }

    #[test]
    fn reference_alternation_slot() {
        let segs = parse_stm("r 1 s 0 1 I'M\n").unwrap();
        let nets = apply_glm_to_reference(&segs, &promoted_im_rule());
        assert_eq!(nets.len(), 1);
        let slot = &nets[0].slots[0];
        assert_eq!(slot.alternatives.len(), 2);
        assert_eq!(slot.alternatives[0].surfaces(), vec!["I'M"]);
        assert_eq!(slot.alternatives[1].surfaces(), vec!["I", "AM"]);
    }

    #[test]
    fn reference_optional_word_gets_empty_alternative() {
        let segs = parse_stm("r 1 s 0 1 (%HESITATION)\n").unwrap();
        let nets = apply_glm_to_reference(&segs, &[]);
        let slot = &nets[0].slots[0];
        assert_eq!(slot.alternatives.len(), 2);
        assert_eq!(slot.alternatives[0].surfaces(), vec!["%HESITATION"]);
        assert!(slot.alternatives[1].is_empty());
    }

    #[test]
    fn reference_unmatched_identity() {
        let segs = parse_stm("r 1 s 0 1 HELLO\n").unwrap();
        let nets = apply_glm_to_reference(&segs, &[]);
        assert_eq!(nets[0].slots.len(), 1);
        assert_eq!(nets[0].slots[0].alternatives[0].surfaces(), vec!["HELLO"]);
    }

    #[test]
    fn hypothesis_block_expansion_flattens() {
        let text = "r A * * <ALT_BEGIN>\nr A 4.49 0.66 UM\nr A * * <ALT>\nr A 4.49 0.66 I'M\nr A * * <ALT_END>\n";
        let stream = parse_ctm(text).unwrap();
        let net = apply_glm_to_hypothesis(&stream, &promoted_im_rule());
        assert_eq!(net.slots.len(), 1);
        let alts: Vec<Vec<String>> = net.slots[0]
            .alternatives
            .iter()
            .map(|a| a.surfaces())
            .collect();
        assert_eq!(
            alts,
            vec![
                vec!["UM".to_string()],
                vec!["I'M".to_string()],
                vec!["I".to_string(), "AM".to_string()]
            ]
        );
    }

    #[test]
    fn hypothesis_empty_stream() {
        let net = apply_glm_to_hypothesis(&[], &promoted_im_rule());
        assert!(net.is_empty());
    }

    #[test]
    fn flatten_dedups_keeping_lowest_rank() {
        let slot = Slot {
            alternatives: vec![
                Alternative::from_words(&["A"]),
                Alternative {
                    items: vec![AltItem::Group(vec![Alternative::from_words(&["A"])])],
                },
            ],
        };
        let flat = flatten_nested_alts(&AltNetwork { slots: vec![slot] });
        assert_eq!(flat.slots[0].alternatives.len(), 1);
        assert_eq!(flat.slots[0].alternatives[0].surfaces(), vec!["A"]);
    }

    #[test]
    fn flatten_nested_example() {
        // {UM, {I'M, {I AM}}} flattens to {UM, I'M, I AM}.
        let inner = Alternative {
            items: vec![AltItem::Group(vec![
                Alternative::from_words(&["I'M"]),
                Alternative {
                    items: vec![AltItem::Group(vec![Alternative::from_words(&["I", "AM"])])],
                },
            ])],
        };
        let slot = Slot {
            alternatives: vec![Alternative::from_words(&["UM"]), inner],
        };
        let net = AltNetwork { slots: vec![slot] };
        let flat = flatten_nested_alts(&net);
        let alts: Vec<Vec<String>> = flat.slots[0]
            .alternatives
            .iter()
            .map(|a| a.surfaces())
            .collect();
        assert_eq!(
            alts,
            vec![
                vec!["UM".to_string()],
                vec!["I'M".to_string()],
                vec!["I".to_string(), "AM".to_string()]
            ]
        );
        assert_eq!(flatten_nested_alts(&flat), flat);
    }

    #[test]
    fn policy_excludes_hyp_backchannels() {
        let net = AltNetwork::from_words(&["UH-HUH", "RIGHT"]);
        let policy = FilterPolicy {
            backchannel_mode: BackchannelMode::Exclude,
            ..FilterPolicy::default()
        };
        let out = apply_policy(&net, &policy, Side::Hypothesis);
        assert_eq!(out.slots.len(), 1);
        assert_eq!(out.slots[0].alternatives[0].surfaces(), vec!["RIGHT"]);
    }

    #[test]
    fn policy_optional_ref_backchannel() {
        let net = AltNetwork::from_words(&["UH-HUH"]);
        let policy = FilterPolicy {
            backchannel_mode: BackchannelMode::Optional,
            ..FilterPolicy::default()
        };
        let out = apply_policy(&net, &policy, Side::Reference);
        assert_eq!(out.slots[0].alternatives.len(), 2);
        assert!(out.slots[0].alternatives[1].is_empty());
    }

    #[test]
    fn policy_score_mode_keeps_backchannels() {
        let net = AltNetwork::from_words(&["UH-HUH", "RIGHT"]);
        let policy = FilterPolicy::default();
        let hyp = apply_policy(&net, &policy, Side::Hypothesis);
        assert_eq!(hyp.slots.len(), 2);
        let refn = apply_policy(&net, &policy, Side::Reference);
        assert_eq!(refn.slots[0].alternatives.len(), 1);
    }

    #[test]
    fn ref_hesitations_always_optional() {
        let net = AltNetwork::from_words(&["UM", "YES"]);
        let out = apply_policy(&net, &FilterPolicy::default(), Side::Reference);
        assert!(out.slots[0].has_empty_alternative());
        assert!(!out.slots[1].has_empty_alternative());
    }

    #[test]
    fn filter_ctm_makes_alt_block() {
        let stream = parse_ctm("sw_4390 A 4.49 0.66 I'M\n").unwrap();
        let out = filter_ctm_entries(&stream, &promoted_im_rule(), &FilterPolicy::default())
            .unwrap();
        assert_eq!(out.len(), 1);
        match &out[0] {
            CtmEntry::Alt(b) => {
                assert_eq!(b.alternatives.len(), 2);
                assert_eq!(b.alternatives[0][0].surface, "I'M");
                assert_eq!(b.alternatives[1][0].surface, "I");
                assert_eq!(b.alternatives[1][1].surface, "AM");
            }
            _ => panic!("expected ALT block"),
        }
    }

    #[test]
    fn filter_ctm_empty_glm_identity() {
        let stream = parse_ctm("r A 0 1 HELLO\nr A 1 1 WORLD\n").unwrap();
        let out = filter_ctm_entries(&stream, &[], &FilterPolicy::default()).unwrap();
        assert_eq!(out, stream);
    }

    #[test]
    fn multiword_lhs_longest_match_wins() {
        let rules = parse_glm("GOING TO => { GOING TO / GONNA }\nGOING => { GOING / GOIN' }\n")
            .unwrap();
        let segs = parse_stm("r 1 s 0 1 GOING TO TOWN\n").unwrap();
        let nets = apply_glm_to_reference(&segs, &rules);
        assert_eq!(nets[0].slots.len(), 2);
        assert_eq!(nets[0].slots[0].alternatives.len(), 2);
        assert_eq!(nets[0].slots[1].alternatives[0].surfaces(), vec!["TOWN"]);
    }
}
