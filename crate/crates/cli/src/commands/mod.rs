pub mod filter;
pub mod lattice;
pub mod oracle;
pub mod score;
pub mod stats;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use altscore_core::align::CostModel;
use altscore_core::glm_filter::{parse_word_list, BackchannelMode, FilterPolicy};

use crate::config::Config;

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Write to the given path, or stdout when none.
pub fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn parse_n(raw: &str) -> Result<usize> {
    if raw.eq_ignore_ascii_case("inf") {
        return Ok(usize::MAX);
    }
    let n: usize = raw.parse().with_context(|| format!("invalid n {raw:?}"))?;
    if n == 0 {
        bail!("n must be at least 1");
    }
    Ok(n)
}

pub fn parse_n_list(raw: &str) -> Result<Vec<usize>> {
    raw.split(',').map(|p| parse_n(p.trim())).collect()
}

/// Parse `sub,ins,del` cost triples.
pub fn parse_costs(raw: &str) -> Result<CostModel> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("expected sub,ins,del costs, got {raw:?}");
    }
    Ok(CostModel {
        substitution: parts[0].parse().context("substitution cost")?,
        insertion: parts[1].parse().context("insertion cost")?,
        deletion: parts[2].parse().context("deletion cost")?,
    })
}

pub fn parse_backchannel_mode(raw: &str) -> Result<BackchannelMode> {
    match raw {
        "score" => Ok(BackchannelMode::Score),
        "optional" => Ok(BackchannelMode::Optional),
        "exclude" => Ok(BackchannelMode::Exclude),
        other => bail!("expected score|optional|exclude, got {other:?}"),
    }
}

/// Shared policy flags, resolved against the config file.
#[derive(Debug, Clone, clap::Args)]
pub struct PolicyArgs {
    /// Drop hesitation words from hypotheses.
    #[arg(long)]
    pub exclude_hyp_hesitations: bool,

    /// Backchannel handling: score, optional, or exclude.
    #[arg(long, value_name = "MODE")]
    pub backchannels: Option<String>,

    /// Replace the built-in hesitation word list (one word per line).
    #[arg(long, value_name = "FILE")]
    pub hesitation_list: Option<PathBuf>,

    /// Replace the built-in backchannel word list (one word per line).
    #[arg(long, value_name = "FILE")]
    pub backchannel_list: Option<PathBuf>,
}

impl PolicyArgs {
    pub fn build(&self, cfg: &Config) -> Result<FilterPolicy> {
        let mut policy = FilterPolicy::default();
        policy.exclude_hyp_hesitations =
            cfg.resolve_bool(self.exclude_hyp_hesitations, "exclude-hyp-hesitations")?;
        let mode = cfg.resolve(
            self.backchannels.clone(),
            "backchannels",
            |s| Ok(s.to_string()),
            "score".to_string(),
        )?;
        policy.backchannel_mode = parse_backchannel_mode(&mode)?;
        let hesitation_list = cfg.resolve(
            self.hesitation_list.clone(),
            "hesitation-list",
            |s| Ok(PathBuf::from(s)),
            PathBuf::new(),
        )?;
        if hesitation_list.components().next().is_some() {
            policy.hesitation_words = parse_word_list(&read_file(&hesitation_list)?);
        }
        let backchannel_list = cfg.resolve(
            self.backchannel_list.clone(),
            "backchannel-list",
            |s| Ok(PathBuf::from(s)),
            PathBuf::new(),
        )?;
        if backchannel_list.components().next().is_some() {
            policy.backchannel_words = parse_word_list(&read_file(&backchannel_list)?);
        }
        Ok(policy)
    }
}
