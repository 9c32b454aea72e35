//! Phrase-alternatives documents: a linear sequence of time intervals, each
//! carrying ranked word-sequence alternatives with scores.
//!
//! ```text
//! pos 0 25
//! alt 1.25 HELLO WORLD
//! alt 3.5 YELLOW WORLD
//! pos 25 40
//! alt 0
//! ```
//!
//! An `alt` line with no words is an explicit empty alternative (the phrase
//! may be silent). Scores are negative log values; rank 0 must carry the
//! minimal score of its position.

use super::{content_lines, parse_f64, parse_u32};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PhraseAlt {
    pub words: Vec<String>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhrasePosition {
    pub start_frame: u32,
    pub end_frame: u32,
    pub alternatives: Vec<PhraseAlt>,
}

impl PhrasePosition {
    pub fn depth(&self) -> usize {
        self.alternatives.len()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhraseAlternativesDoc {
    pub positions: Vec<PhrasePosition>,
}

impl PhraseAlternativesDoc {
    /// Per-position alternative depths.
    pub fn depths(&self) -> Vec<usize> {
        self.positions.iter().map(PhrasePosition::depth).collect()
    }

    /// Copy of the document with each position truncated to its top `n`
    /// alternatives.
    pub fn truncated(&self, n: usize) -> PhraseAlternativesDoc {
        PhraseAlternativesDoc {
            positions: self
                .positions
                .iter()
                .map(|p| PhrasePosition {
                    start_frame: p.start_frame,
                    end_frame: p.end_frame,
                    alternatives: p.alternatives.iter().take(n).cloned().collect(),
                })
                .collect(),
        }
    }

    /// The concatenated rank-0 word sequence.
    pub fn best_words(&self) -> Vec<String> {
        self.positions
            .iter()
            .flat_map(|p| p.alternatives.first().map(|a| a.words.clone()).unwrap_or_default())
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let mut prev_end: Option<u32> = None;
        for (i, p) in self.positions.iter().enumerate() {
            if p.alternatives.is_empty() {
                return Err(Error::Internal(format!(
                    "phrase position {i} has no alternatives"
                )));
            }
            if let Some(end) = prev_end {
                if p.start_frame < end {
                    return Err(Error::Internal(format!(
                        "phrase position {i} overlaps the previous position"
                    )));
                }
            }
            let first = p.alternatives[0].score;
            if p.alternatives.iter().any(|a| a.score < first) {
                return Err(Error::Internal(format!(
                    "phrase position {i}: rank 0 does not carry the minimal score"
                )));
            }
            prev_end = Some(p.end_frame);
        }
        Ok(())
    }
}

/// Word-level alternatives: every alternative holds at most one word. The
/// serialized form is the phrase-alternatives format.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WordAltsDoc(pub PhraseAlternativesDoc);

impl WordAltsDoc {
    pub fn new(doc: PhraseAlternativesDoc) -> Result<WordAltsDoc> {
        for (i, p) in doc.positions.iter().enumerate() {
            if p.alternatives.iter().any(|a| a.words.len() > 1) {
                return Err(Error::Internal(format!(
                    "word position {i} holds a multi-word alternative"
                )));
            }
        }
        Ok(WordAltsDoc(doc))
    }

    pub fn doc(&self) -> &PhraseAlternativesDoc {
        &self.0
    }

    pub fn depths(&self) -> Vec<usize> {
        self.0.depths()
    }
}

pub fn parse_phrase_alts(text: &str) -> Result<PhraseAlternativesDoc> {
    let mut doc = PhraseAlternativesDoc::default();
    for (lineno, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "pos" => {
                if fields.len() != 3 {
                    return Err(Error::parse(
                        lineno,
                        format!("pos line expects 3 fields, got {}", fields.len()),
                    ));
                }
                doc.positions.push(PhrasePosition {
                    start_frame: parse_u32(lineno, "start_frame", fields[1])?,
                    end_frame: parse_u32(lineno, "end_frame", fields[2])?,
                    alternatives: Vec::new(),
                });
            }
            "alt" => {
                if fields.len() < 2 {
                    return Err(Error::parse(lineno, "alt line expects a score"));
                }
                let pos = doc
                    .positions
                    .last_mut()
                    .ok_or_else(|| Error::parse(lineno, "alt line before any pos line"))?;
                pos.alternatives.push(PhraseAlt {
                    score: parse_f64(lineno, "score", fields[1])?,
                    words: fields[2..].iter().map(|w| w.to_ascii_uppercase()).collect(),
                });
            }
            other => {
                return Err(Error::parse(
                    lineno,
                    format!("expected `pos` or `alt`, got {other:?}"),
                ))
            }
        }
    }
    doc.validate().map_err(|e| match e {
        Error::Internal(msg) => Error::parse(0, msg),
        e => e,
    })?;
    Ok(doc)
}

pub fn parse_word_alts(text: &str) -> Result<WordAltsDoc> {
    WordAltsDoc::new(parse_phrase_alts(text)?).map_err(|e| match e {
        Error::Internal(msg) => Error::parse(0, msg),
        e => e,
    })
}

pub fn write_phrase_alts(doc: &PhraseAlternativesDoc) -> String {
    let mut out = String::new();
    for p in &doc.positions {
        out.push_str(&format!("pos {} {}\n", p.start_frame, p.end_frame));
        for a in &p.alternatives {
            out.push_str("alt ");
            out.push_str(&a.score.to_string());
            for w in &a.words {
                out.push(' ');
                out.push_str(w);
            }
            out.push('\n');
        }
    }
    out
}
