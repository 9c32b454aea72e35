//! CTM (conversation time mark) hypothesis files, including ALT blocks.
//!
//! Plain token lines carry `recording channel start duration word [conf]`.
//! Alternative regions are bracketed by marker lines whose time fields are
//! the literal `*` placeholder:
//!
//! ```text
//! sw_4390 A * * <ALT_BEGIN>
//! sw_4390 A 4.49 0.66 UM
//! sw_4390 A * * <ALT>
//! sw_4390 A 4.49 0.66 I'M
//! sw_4390 A * * <ALT_END>
//! ```

use super::{content_lines, fmt_seconds, parse_f64, PhraseAlternativesDoc};
use crate::error::{Error, Result};

/// One hypothesized word.
#[derive(Debug, Clone, PartialEq)]
pub struct CtmToken {
    pub recording_id: String,
    pub channel: String,
    pub start: f64,
    pub duration: f64,
    pub surface: String,
    pub confidence: Option<f64>,
}

impl CtmToken {
    pub fn midpoint(&self) -> f64 {
        self.start + self.duration / 2.0
    }
}

/// A ranked list of alternative token sequences; a sequence may be empty,
/// denoting a skippable block. Rank order equals file order.
#[derive(Debug, Clone, PartialEq)]
pub struct CtmAltBlock {
    pub recording_id: String,
    pub channel: String,
    pub alternatives: Vec<Vec<CtmToken>>,
}

impl CtmAltBlock {
    /// First token in rank order, used for time-based segment assignment.
    pub fn first_token(&self) -> Option<&CtmToken> {
        self.alternatives.iter().find_map(|a| a.first())
    }
}

/// An element of a hypothesis stream.
#[derive(Debug, Clone, PartialEq)]
pub enum CtmEntry {
    Token(CtmToken),
    Alt(CtmAltBlock),
}

impl CtmEntry {
    pub fn recording_id(&self) -> &str {
        match self {
            CtmEntry::Token(t) => &t.recording_id,
            CtmEntry::Alt(b) => &b.recording_id,
        }
    }

    pub fn channel(&self) -> &str {
        match self {
            CtmEntry::Token(t) => &t.channel,
            CtmEntry::Alt(b) => &b.channel,
        }
    }

    /// Count of words on the preferred (rank-0) path through this entry.
    pub fn rank0_word_count(&self) -> usize {
        match self {
            CtmEntry::Token(_) => 1,
            CtmEntry::Alt(b) => b.alternatives.first().map_or(0, Vec::len),
        }
    }
}

const ALT_BEGIN: &str = "<ALT_BEGIN>";
const ALT_SEP: &str = "<ALT>";
const ALT_END: &str = "<ALT_END>";

struct OpenBlock {
    line: usize,
    recording_id: String,
    channel: String,
    done: Vec<Vec<CtmToken>>,
    current: Vec<CtmToken>,
}

pub fn parse_ctm(text: &str) -> Result<Vec<CtmEntry>> {
    let mut entries = Vec::new();
    let mut open: Option<OpenBlock> = None;
    for (lineno, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() == 5 && fields[2] == "*" && fields[3] == "*" {
            match fields[4] {
                ALT_BEGIN => {
                    if open.is_some() {
                        return Err(Error::parse(
                            lineno,
                            "nested <ALT_BEGIN> inside an open block; \
                             flatten nested alternatives upstream with flatten_nested_alts",
                        ));
                    }
                    open = Some(OpenBlock {
                        line: lineno,
                        recording_id: fields[0].to_string(),
                        channel: fields[1].to_string(),
                        done: Vec::new(),
                        current: Vec::new(),
                    });
                    continue;
                }
                ALT_SEP => {
                    let block = open.as_mut().ok_or_else(|| {
                        Error::parse(lineno, "<ALT> outside of an ALT block")
                    })?;
                    block.done.push(std::mem::take(&mut block.current));
                    continue;
                }
                ALT_END => {
                    let mut block = open
                        .take()
                        .ok_or_else(|| Error::parse(lineno, "<ALT_END> without <ALT_BEGIN>"))?;
                    block.done.push(block.current);
                    entries.push(CtmEntry::Alt(CtmAltBlock {
                        recording_id: block.recording_id,
                        channel: block.channel,
                        alternatives: block.done,
                    }));
                    continue;
                }
                _ => {}
            }
        }
        if fields.len() < 5 || fields.len() > 6 {
            return Err(Error::parse(
                lineno,
                format!("expected 5 or 6 fields, got {}", fields.len()),
            ));
        }
        let duration = parse_f64(lineno, "duration", fields[3])?;
        if duration < 0.0 {
            return Err(Error::parse(lineno, "field duration: must be non-negative"));
        }
        let token = CtmToken {
            recording_id: fields[0].to_string(),
            channel: fields[1].to_string(),
            start: parse_f64(lineno, "start", fields[2])?,
            duration,
            surface: fields[4].to_ascii_uppercase(),
            confidence: match fields.get(5) {
                Some(v) => Some(parse_f64(lineno, "confidence", v)?),
                None => None,
            },
        };
        match open.as_mut() {
            Some(block) => {
                if token.recording_id != block.recording_id || token.channel != block.channel {
                    return Err(Error::parse(
                        lineno,
                        format!(
                            "ALT member {}/{} does not match block {}/{}",
                            token.recording_id, token.channel, block.recording_id, block.channel
                        ),
                    ));
                }
                block.current.push(token);
            }
            None => entries.push(CtmEntry::Token(token)),
        }
    }
    if let Some(block) = open {
        return Err(Error::parse(
            block.line,
            "<ALT_BEGIN> without matching <ALT_END>",
        ));
    }
    Ok(entries)
}

fn push_token_line(out: &mut String, t: &CtmToken) {
    out.push_str(&t.recording_id);
    out.push(' ');
    out.push_str(&t.channel);
    out.push(' ');
    out.push_str(&fmt_seconds(t.start));
    out.push(' ');
    out.push_str(&fmt_seconds(t.duration));
    out.push(' ');
    out.push_str(&t.surface);
    if let Some(c) = t.confidence {
        out.push(' ');
        out.push_str(&fmt_seconds(c));
    }
    out.push('\n');
}

fn push_marker_line(out: &mut String, recording_id: &str, channel: &str, marker: &str) {
    out.push_str(recording_id);
    out.push(' ');
    out.push_str(channel);
    out.push_str(" * * ");
    out.push_str(marker);
    out.push('\n');
}

pub fn write_ctm(entries: &[CtmEntry]) -> String {
    let mut out = String::new();
    for entry in entries {
        match entry {
            CtmEntry::Token(t) => push_token_line(&mut out, t),
            CtmEntry::Alt(b) => {
                push_marker_line(&mut out, &b.recording_id, &b.channel, ALT_BEGIN);
                for (i, alt) in b.alternatives.iter().enumerate() {
                    if i > 0 {
                        push_marker_line(&mut out, &b.recording_id, &b.channel, ALT_SEP);
                    }
                    for t in alt {
                        push_token_line(&mut out, t);
                    }
                }
                push_marker_line(&mut out, &b.recording_id, &b.channel, ALT_END);
            }
        }
    }
    out
}

/// Serialize an alternatives document as a CTM stream. Positions with a
/// single alternative become plain token lines; positions with several become
/// ALT blocks carrying real times inside the block, `*` only on marker lines.
/// A position's time interval is split evenly over each alternative's words.
pub fn write_ctm_with_alts(
    doc: &PhraseAlternativesDoc,
    recording_id: &str,
    channel: &str,
    frame_rate: f64,
) -> String {
    let entries = ctm_entries_from_doc(doc, recording_id, channel, frame_rate);
    write_ctm(&entries)
}

/// The structured form behind [`write_ctm_with_alts`].
pub fn ctm_entries_from_doc(
    doc: &PhraseAlternativesDoc,
    recording_id: &str,
    channel: &str,
    frame_rate: f64,
) -> Vec<CtmEntry> {
    let mut entries = Vec::new();
    for pos in &doc.positions {
        let start = pos.start_frame as f64 * frame_rate;
        let span = (pos.end_frame.saturating_sub(pos.start_frame)) as f64 * frame_rate;
        let tokens_of = |words: &[String]| -> Vec<CtmToken> {
            let k = words.len();
            words
                .iter()
                .enumerate()
                .map(|(i, w)| CtmToken {
                    recording_id: recording_id.to_string(),
                    channel: channel.to_string(),
                    start: start + span * i as f64 / k as f64,
                    duration: span / k as f64,
                    surface: w.clone(),
                    confidence: None,
                })
                .collect()
        };
        if pos.alternatives.len() == 1 {
            for t in tokens_of(&pos.alternatives[0].words) {
                entries.push(CtmEntry::Token(t));
            }
        } else {
            entries.push(CtmEntry::Alt(CtmAltBlock {
                recording_id: recording_id.to_string(),
                channel: channel.to_string(),
                alternatives: pos
                    .alternatives
                    .iter()
                    .map(|a| tokens_of(&a.words))
                    .collect(),
            }));
        }
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::PhraseAlt;
    use crate::formats::PhrasePosition;

    const PAPER_BLOCK: &str = "sw_4390 A * * <ALT_BEGIN>\n\
                               sw_4390 A 4.49 0.66 UM\n\
                               sw_4390 A * * <ALT>\n\
                               sw_4390 A 4.49 0.66 I'M\n\
                               sw_4390 A * * <ALT_END>\n";

    #[test]
    fn parses_alt_block() {
        let entries = parse_ctm(PAPER_BLOCK).unwrap();
        assert_eq!(entries.len(), 1);
        match &entries[0] {
            CtmEntry::Alt(b) => {
                assert_eq!(b.alternatives.len(), 2);
                assert_eq!(b.alternatives[0][0].surface, "UM");
                assert_eq!(b.alternatives[1][0].surface, "I'M");
                assert_eq!(b.alternatives[0][0].start, 4.49);
                assert_eq!(b.alternatives[0][0].duration, 0.66);
            }
            _ => panic!("expected ALT block"),
        }
    }

    #[test]
    fn plain_token() {
        let entries = parse_ctm("sw_4390 A 4.49 0.66 UM\n").unwrap();
        assert_eq!(entries.len(), 1);
        assert!(matches!(&entries[0], CtmEntry::Token(t) if t.surface == "UM"));
    }

    #[test]
    fn unbalanced_block_rejected() {
        let err = parse_ctm("sw_4390 A * * <ALT_BEGIN>\nsw_4390 A 4.49 0.66 UM\n").unwrap_err();
        assert!(err.to_string().contains("<ALT_END>"));
    }

    #[test]
    fn nested_begin_rejected_with_hint() {
        let text = "r A * * <ALT_BEGIN>\nr A * * <ALT_BEGIN>\n";
        let err = parse_ctm(text).unwrap_err();
        assert!(err.to_string().contains("flatten_nested_alts"));
    }

    #[test]
    fn round_trip_paper_block() {
        let entries = parse_ctm(PAPER_BLOCK).unwrap();
        assert_eq!(write_ctm(&entries), PAPER_BLOCK);
    }

    #[test]
    fn empty_alternative_round_trips() {
        let text = "r A * * <ALT_BEGIN>\nr A 1 0.5 HI\nr A * * <ALT>\nr A * * <ALT_END>\n";
        let entries = parse_ctm(text).unwrap();
        match &entries[0] {
            CtmEntry::Alt(b) => {
                assert_eq!(b.alternatives.len(), 2);
                assert!(b.alternatives[1].is_empty());
            }
            _ => panic!(),
        }
        assert_eq!(write_ctm(&entries), text);
    }

    #[test]
    fn doc_emission_matches_paper_block() {
        let doc = PhraseAlternativesDoc {
            positions: vec![PhrasePosition {
                start_frame: 449,
                end_frame: 515,
                alternatives: vec![
                    PhraseAlt { words: vec!["UM".into()], score: 0.0 },
                    PhraseAlt { words: vec!["I'M".into()], score: 1.0 },
                ],
            }],
        };
        assert_eq!(write_ctm_with_alts(&doc, "sw_4390", "A", 0.01), PAPER_BLOCK);
    }
}
