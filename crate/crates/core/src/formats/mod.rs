//! Bit-exact parsing and serialization of the line-oriented text formats:
//! STM references, CTM hypotheses (with ALT blocks), GLM mapping rules,
//! lattices, and phrase-alternatives documents.
//!
//! All formats are ASCII/UTF-8, space-delimited, one record per line, with
//! `;;` comment lines. Parsers uppercase word surfaces on ingest; all scoring
//! downstream is case-insensitive by construction.

mod ctm;
mod glm;
mod lattice;
mod phrase;
mod stm;

pub use ctm::{parse_ctm, write_ctm, write_ctm_with_alts, CtmAltBlock, CtmEntry, CtmToken};
pub use glm::{parse_glm, write_glm, GlmRule, RuleKind};
pub use lattice::{parse_lattice, write_lattice, Lattice, LatticeArc, EPSILON_LABEL};
pub use phrase::{
    parse_phrase_alts, parse_word_alts, write_phrase_alts, PhraseAlt, PhrasePosition,
    PhraseAlternativesDoc, WordAltsDoc,
};
pub use stm::{parse_stm, write_stm, RefWord, StmSegment};

use crate::error::{Error, Result};

/// Iterate non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with(";;"))
}

/// Format a time in seconds: at most six decimals, trailing zeros trimmed.
/// Keeps ordinary STM/CTM times such as `4.49` byte-stable across a
/// parse/write round trip.
fn fmt_seconds(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0');
    let s = s.trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn parse_f64(line: usize, field: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::parse(line, format!("field {field}: invalid number {value:?}")))
}

fn parse_u32(line: usize, field: &str, value: &str) -> Result<u32> {
    value
        .parse::<u32>()
        .map_err(|_| Error::parse(line, format!("field {field}: invalid integer {value:?}")))
}

fn parse_usize(line: usize, field: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("field {field}: invalid integer {value:?}")))
}
