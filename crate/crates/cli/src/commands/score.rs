use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;

use altscore_core::formats::{parse_ctm, parse_glm, parse_stm};
use altscore_core::pipeline::{score_corpus, stage_ladder, RuleMode, ScoreConfig, ScoreOutcome};
use altscore_core::report::{ScoreReport, ScoreRow};
use altscore_core::segmentation::SegmentationMode;

use super::{parse_costs, read_file, PolicyArgs};
use crate::config::Config;

/// Score a hypothesis CTM against a reference STM.
#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Reference STM file.
    #[arg(long, value_name = "FILE")]
    stm: PathBuf,

    /// Hypothesis CTM file.
    #[arg(long, value_name = "FILE")]
    ctm: PathBuf,

    /// GLM normalization rules.
    #[arg(long, value_name = "FILE")]
    glm: Option<PathBuf>,

    /// Edit costs as sub,ins,del.
    #[arg(long, value_name = "S,I,D")]
    costs: Option<String>,

    /// Segmentation: per-segment or single.
    #[arg(long, value_name = "MODE")]
    segmentation: Option<String>,

    /// Apply expansion rules in place instead of promoting them.
    #[arg(long)]
    legacy_expansions: bool,

    /// Maximum seconds a token may lie outside every segment without warning.
    #[arg(long, value_name = "SECONDS")]
    slack: Option<f64>,

    /// Print the six-stage scoring ladder instead of one configuration.
    #[arg(long)]
    stages: bool,

    /// Emit the machine-readable report.
    #[arg(long)]
    json: bool,

    #[command(flatten)]
    policy: PolicyArgs,
}

fn parse_segmentation(raw: &str) -> Result<SegmentationMode> {
    match raw {
        "per-segment" => Ok(SegmentationMode::PerSegment),
        "single" => Ok(SegmentationMode::SingleSegment),
        other => bail!("expected per-segment|single, got {other:?}"),
    }
}

fn outcome_rows(outcome: &ScoreOutcome) -> Vec<ScoreRow> {
    let mut rows: Vec<ScoreRow> = outcome
        .by_recording()
        .into_iter()
        .map(|(label, (c, s, d, i))| ScoreRow::from_counts(label, c, s, d, i))
        .collect();
    let (c, s, d, i) = outcome.counts();
    rows.push(ScoreRow::from_counts("OVERALL", c, s, d, i));
    rows
}

pub fn run(args: &ScoreArgs, cfg: &Config) -> Result<()> {
    let stm = parse_stm(&read_file(&args.stm)?)?;
    let ctm = parse_ctm(&read_file(&args.ctm)?)?;
    let glm = match &args.glm {
        Some(path) => parse_glm(&read_file(path)?)?,
        None => Vec::new(),
    };
    let score_cfg = ScoreConfig {
        rule_mode: if cfg.resolve_bool(args.legacy_expansions, "legacy-expansions")? {
            RuleMode::Legacy
        } else {
            RuleMode::Promoted
        },
        policy: args.policy.build(cfg)?,
        segmentation: cfg.resolve(
            args.segmentation.as_deref().map(parse_segmentation).transpose()?,
            "segmentation",
            |s| parse_segmentation(s),
            SegmentationMode::PerSegment,
        )?,
        costs: cfg.resolve(
            args.costs.as_deref().map(parse_costs).transpose()?,
            "costs",
            |s| parse_costs(s),
            Default::default(),
        )?,
        assignment_slack: cfg.resolve(args.slack, "slack", |s| Ok(s.parse()?), 10.0)?,
    };

    let json = cfg.resolve_bool(args.json, "json")?;
    let report = if args.stages {
        let stages = stage_ladder(&stm, &ctm, &glm, &score_cfg)?;
        for stage in &stages {
            for w in &stage.outcome.warnings {
                eprintln!("warning: {w}");
            }
        }
        ScoreReport {
            rows: stages
                .iter()
                .map(|stage| {
                    let (c, s, d, i) = stage.outcome.counts();
                    ScoreRow::from_counts(stage.name, c, s, d, i)
                })
                .collect(),
        }
    } else {
        let outcome = score_corpus(&stm, &ctm, &glm, &score_cfg)?;
        for w in &outcome.warnings {
            eprintln!("warning: {w}");
        }
        ScoreReport {
            rows: outcome_rows(&outcome),
        }
    };

    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_table());
    }
    Ok(())
}
