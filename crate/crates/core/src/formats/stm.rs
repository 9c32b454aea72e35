//! STM (segment time mark) reference files.
//!
//! One segment per line:
//!
//! ```text
//! recording channel speaker start end [<tags>] word (optional_word) ...
//! ```
//!
//! Parenthesized words are optional deletions. A line may carry zero words,
//! which denotes an explicit ignore segment.

use super::{content_lines, fmt_seconds, parse_f64};
use crate::error::{Error, Result};

/// One reference word; `optional_deletion` is set iff the source text wrapped
/// the word in parentheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefWord {
    pub surface: String,
    pub optional_deletion: bool,
}

impl RefWord {
    pub fn new(surface: impl Into<String>, optional_deletion: bool) -> RefWord {
        RefWord {
            surface: surface.into().to_ascii_uppercase(),
            optional_deletion,
        }
    }
}

/// One reference segment of an STM file.
#[derive(Debug, Clone, PartialEq)]
pub struct StmSegment {
    pub recording_id: String,
    pub channel: String,
    pub speaker_id: String,
    pub start: f64,
    pub end: f64,
    pub label_tags: Option<String>,
    pub words: Vec<RefWord>,
}

pub fn parse_stm(text: &str) -> Result<Vec<StmSegment>> {
    let mut segments = Vec::new();
    for (lineno, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 5 {
            return Err(Error::parse(
                lineno,
                format!("expected at least 5 fields, got {}", fields.len()),
            ));
        }
        let start = parse_f64(lineno, "start", fields[3])?;
        let end = parse_f64(lineno, "end", fields[4])?;
        if start < 0.0 {
            return Err(Error::parse(lineno, "field start: must be non-negative"));
        }
        if end <= start {
            return Err(Error::parse(
                lineno,
                format!("field end: {end} is not after start {start}"),
            ));
        }
        let mut rest = &fields[5..];
        let mut label_tags = None;
        if let Some(first) = rest.first() {
            if first.starts_with('<') && first.ends_with('>') {
                label_tags = Some(first.to_string());
                rest = &rest[1..];
            }
        }
        let mut words = Vec::with_capacity(rest.len());
        for w in rest {
            if let Some(inner) = w.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                if inner.is_empty() {
                    return Err(Error::parse(lineno, "field words: empty parentheses"));
                }
                words.push(RefWord::new(inner, true));
            } else {
                words.push(RefWord::new(*w, false));
            }
        }
        segments.push(StmSegment {
            recording_id: fields[0].to_string(),
            channel: fields[1].to_string(),
            speaker_id: fields[2].to_string(),
            start,
            end,
            label_tags,
            words,
        });
    }
    Ok(segments)
}

pub fn write_stm(segments: &[StmSegment]) -> String {
    let mut out = String::new();
    for seg in segments {
        out.push_str(&seg.recording_id);
        out.push(' ');
        out.push_str(&seg.channel);
        out.push(' ');
        out.push_str(&seg.speaker_id);
        out.push(' ');
        out.push_str(&fmt_seconds(seg.start));
        out.push(' ');
        out.push_str(&fmt_seconds(seg.end));
        if let Some(tags) = &seg.label_tags {
            out.push(' ');
            out.push_str(tags);
        }
        for w in &seg.words {
            out.push(' ');
            if w.optional_deletion {
                out.push('(');
                out.push_str(&w.surface);
                out.push(')');
            } else {
                out.push_str(&w.surface);
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_hesitation_example() {
        let segs = parse_stm("sw_4390 A sw_4390_A 4.49 5.15 (%HESITATION) I'M\n").unwrap();
        assert_eq!(segs.len(), 1);
        let s = &segs[0];
        assert_eq!(s.recording_id, "sw_4390");
        assert_eq!(s.channel, "A");
        assert_eq!(s.speaker_id, "sw_4390_A");
        assert_eq!(
            s.words,
            vec![RefWord::new("%HESITATION", true), RefWord::new("I'M", false)]
        );
    }

    #[test]
    fn empty_input_and_comments() {
        assert!(parse_stm("").unwrap().is_empty());
        assert!(parse_stm(";; a\n;; b\n;; c\n").unwrap().is_empty());
    }

    #[test]
    fn lowercase_uppercased_and_tags_kept() {
        let segs = parse_stm("r 1 spk 0.0 1.0 <O,F0> hello world\n").unwrap();
        assert_eq!(segs[0].label_tags.as_deref(), Some("<O,F0>"));
        assert_eq!(segs[0].words[0].surface, "HELLO");
    }

    #[test]
    fn end_before_start_rejected() {
        let err = parse_stm("r 1 s 2.0 1.0 A\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn round_trip() {
        let text = "sw_4390 A sw_4390_A 4.49 5.15 (%HESITATION) I'M\nr 1 spk 0 1 <O> HI\n";
        let segs = parse_stm(text).unwrap();
        assert_eq!(write_stm(&segs), text);
    }
}
