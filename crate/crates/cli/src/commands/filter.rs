use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;

use altscore_core::formats::{parse_ctm, parse_glm, parse_stm, write_ctm, write_stm};
use altscore_core::glm_filter::{filter_ctm_entries, filter_stm, promote_expansions};
use altscore_core::segmentation::merge_stm;

use super::{emit, read_file, PolicyArgs};
use crate::config::Config;

/// Apply GLM rules and word policies to an STM or CTM file.
#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Reference STM to filter.
    #[arg(long, value_name = "FILE", conflicts_with = "ctm")]
    stm: Option<PathBuf>,

    /// Hypothesis CTM to filter.
    #[arg(long, value_name = "FILE")]
    ctm: Option<PathBuf>,

    /// GLM normalization rules.
    #[arg(long, value_name = "FILE")]
    glm: Option<PathBuf>,

    /// Apply expansion rules in place instead of promoting them.
    #[arg(long)]
    legacy_expansions: bool,

    /// Output file; stdout when omitted.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(flatten)]
    policy: PolicyArgs,
}

pub fn run(args: &FilterArgs, cfg: &Config) -> Result<()> {
    let rules = match &args.glm {
        Some(path) => parse_glm(&read_file(path)?)?,
        None => Vec::new(),
    };
    let rules = if cfg.resolve_bool(args.legacy_expansions, "legacy-expansions")? {
        rules
    } else {
        promote_expansions(&rules)
    };
    let policy = args.policy.build(cfg)?;
    match (&args.stm, &args.ctm) {
        (Some(stm), None) => {
            let segments = parse_stm(&read_file(stm)?)?;
            emit(args.output.as_ref(), &write_stm(&filter_stm(&segments, &rules, &policy)))
        }
        (None, Some(ctm)) => {
            let entries = parse_ctm(&read_file(ctm)?)?;
            let filtered = filter_ctm_entries(&entries, &rules, &policy)?;
            emit(args.output.as_ref(), &write_ctm(&filtered))
        }
        _ => bail!("filter requires exactly one of --stm or --ctm"),
    }
}

/// Convert a multi-segment STM into one segment per (recording, channel).
#[derive(Debug, Args)]
pub struct MergeStmArgs {
    /// Input STM file.
    stm: PathBuf,

    /// Output file; stdout when omitted.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

pub fn run_merge(args: &MergeStmArgs) -> Result<()> {
    let segments = parse_stm(&read_file(&args.stm)?)?;
    let outcome = merge_stm(&segments);
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    emit(args.output.as_ref(), &write_stm(&outcome.merged))
}
