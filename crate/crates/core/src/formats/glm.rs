//! GLM (global mapping) normalization rule files.
//!
//! ```text
//! ;; expansion: the left side is unconditionally rewritten
//! I'M => I AM
//! ;; alternation: any listed form is accepted, written order is rank order
//! I'M => { I'M / I AM }
//! ;; a trailing scope annotation after `/` outside braces is kept as-is
//! GONNA => GOING TO / [ ] __ [ ]
//! ```

use super::content_lines;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Expansion,
    Alternation,
}

/// A left-hand phrase mapped to ranked right-hand phrases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlmRule {
    pub lhs: Vec<String>,
    pub rhs: Vec<Vec<String>>,
    pub kind: RuleKind,
    /// Opaque trailing annotation, preserved but ignored for matching.
    pub annotation: Option<String>,
}

impl GlmRule {
    pub fn expansion<S: AsRef<str>>(lhs: &[S], rhs: &[S]) -> GlmRule {
        GlmRule {
            lhs: upper(lhs),
            rhs: vec![upper(rhs)],
            kind: RuleKind::Expansion,
            annotation: None,
        }
    }

    pub fn alternation<S: AsRef<str>>(lhs: &[S], rhs: &[Vec<String>]) -> GlmRule {
        GlmRule {
            lhs: upper(lhs),
            rhs: rhs
                .iter()
                .map(|p| p.iter().map(|w| w.to_ascii_uppercase()).collect())
                .collect(),
            kind: RuleKind::Alternation,
            annotation: None,
        }
    }
}

fn upper<S: AsRef<str>>(words: &[S]) -> Vec<String> {
    words
        .iter()
        .map(|w| w.as_ref().to_ascii_uppercase())
        .collect()
}

fn split_words(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| w.to_ascii_uppercase())
        .collect()
}

pub fn parse_glm(text: &str) -> Result<Vec<GlmRule>> {
    let mut rules = Vec::new();
    for (lineno, line) in content_lines(text) {
        let (lhs_text, rhs_text) = line
            .split_once("=>")
            .ok_or_else(|| Error::parse(lineno, "missing `=>`"))?;
        let lhs = split_words(lhs_text);
        if lhs.is_empty() {
            return Err(Error::parse(lineno, "empty left-hand side"));
        }
        let rhs_text = rhs_text.trim();
        let (kind, rhs, annotation) = if let Some(body) = rhs_text.strip_prefix('{') {
            let (inside, after) = body
                .split_once('}')
                .ok_or_else(|| Error::parse(lineno, "unclosed `{` in right-hand side"))?;
            let phrases: Vec<Vec<String>> = inside.split('/').map(split_words).collect();
            if phrases.iter().any(Vec::is_empty) {
                return Err(Error::parse(lineno, "empty alternative in alternation"));
            }
            if phrases.len() < 2 {
                return Err(Error::parse(
                    lineno,
                    "alternation must list at least 2 forms",
                ));
            }
            let after = after.trim();
            let annotation = match after.strip_prefix('/') {
                Some(a) => Some(a.trim().to_string()),
                None if after.is_empty() => None,
                None => {
                    return Err(Error::parse(
                        lineno,
                        format!("unexpected trailing text {after:?}"),
                    ))
                }
            };
            (RuleKind::Alternation, phrases, annotation)
        } else {
            let (phrase_text, annotation) = match rhs_text.split_once('/') {
                Some((p, a)) => (p, Some(a.trim().to_string())),
                None => (rhs_text, None),
            };
            let phrase = split_words(phrase_text);
            if phrase.is_empty() {
                return Err(Error::parse(lineno, "empty right-hand side"));
            }
            (RuleKind::Expansion, vec![phrase], annotation)
        };
        rules.push(GlmRule {
            lhs,
            rhs,
            kind,
            annotation,
        });
    }
    Ok(rules)
}

pub fn write_glm(rules: &[GlmRule]) -> String {
    let mut out = String::new();
    for rule in rules {
        out.push_str(&rule.lhs.join(" "));
        out.push_str(" => ");
        match rule.kind {
            RuleKind::Expansion => out.push_str(&rule.rhs[0].join(" ")),
            RuleKind::Alternation => {
                out.push_str("{ ");
                let parts: Vec<String> = rule.rhs.iter().map(|p| p.join(" ")).collect();
                out.push_str(&parts.join(" / "));
                out.push_str(" }");
            }
        }
        if let Some(a) = &rule.annotation {
            out.push_str(" / ");
            out.push_str(a);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_rule() {
        let rules = parse_glm("I'M => I AM\n").unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].kind, RuleKind::Expansion);
        assert_eq!(rules[0].lhs, vec!["I'M"]);
        assert_eq!(rules[0].rhs, vec![vec!["I".to_string(), "AM".to_string()]]);
    }

    #[test]
    fn alternation_rule() {
        let rules = parse_glm("I'M => { I'M / I AM }\n").unwrap();
        assert_eq!(rules[0].kind, RuleKind::Alternation);
        assert_eq!(
            rules[0].rhs,
            vec![vec!["I'M".to_string()], vec!["I".to_string(), "AM".to_string()]]
        );
    }

    #[test]
    fn empty_rhs_rejected() {
        assert!(parse_glm("X =>\n").is_err());
        assert!(parse_glm("X => / note\n").is_err());
        assert!(parse_glm("X Y\n").is_err());
    }

    #[test]
    fn annotation_preserved() {
        let text = "GONNA => GOING TO / [ ] __ [ ]\n";
        let rules = parse_glm(text).unwrap();
        assert_eq!(rules[0].annotation.as_deref(), Some("[ ] __ [ ]"));
        assert_eq!(write_glm(&rules), text);
    }

    #[test]
    fn round_trip_alternation() {
        let text = "I'M => { I'M / I AM }\nUH-HUH => { UH-HUH / UM-HUM } / bc\n";
        let rules = parse_glm(text).unwrap();
        assert_eq!(write_glm(&rules), text);
    }
}
