use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;

use altscore_core::align::CostModel;
use altscore_core::formats::{parse_glm, parse_stm};
use altscore_core::glm_filter::{apply_glm_to_reference, promote_expansions};
use altscore_core::network::AltNetwork;
use altscore_core::oracle::{oracle_curve_aggregate, CurveInput};
use altscore_core::report::{CurveReport, CurveRow};

use super::lattice::{derive_doc, load_lattice, LatticeContext, Level};
use super::{parse_costs, parse_n_list, read_file};
use crate::config::Config;

/// Oracle-score lattice-derived alternatives against a reference STM. Each
/// lattice is paired with the reference segment at the same position in STM
/// file order.
#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Alternatives level: nbest, word, or phrase.
    #[arg(long, value_name = "LEVEL")]
    level: Option<String>,

    /// Comma-separated alternative depths; `inf` for all.
    #[arg(long, value_name = "N1,N2,...")]
    n: Option<String>,

    /// Reference STM file, one segment per lattice.
    #[arg(long, value_name = "FILE")]
    stm: PathBuf,

    /// GLM rules applied to the reference.
    #[arg(long, value_name = "FILE")]
    glm: Option<PathBuf>,

    /// Edit costs as sub,ins,del.
    #[arg(long, value_name = "S,I,D")]
    costs: Option<String>,

    /// Arc posterior threshold for phrase boundary detection.
    #[arg(long, value_name = "P")]
    posterior_threshold: Option<f64>,

    /// Seconds per frame.
    #[arg(long, value_name = "RATE")]
    frame_rate: Option<f64>,

    /// Emit the machine-readable report.
    #[arg(long)]
    json: bool,

    /// Lattice files, one per reference segment.
    #[arg(required = true)]
    lattices: Vec<PathBuf>,
}

pub fn run(args: &OracleArgs, cfg: &Config) -> Result<()> {
    let level = Level::parse(&cfg.resolve(
        args.level.clone(),
        "level",
        |s| Ok(s.to_string()),
        "phrase".to_string(),
    )?)?;
    let n_values = cfg.resolve(
        args.n.as_deref().map(parse_n_list).transpose()?,
        "n",
        |s| parse_n_list(s),
        vec![10],
    )?;
    let costs: CostModel = cfg.resolve(
        args.costs.as_deref().map(parse_costs).transpose()?,
        "costs",
        |s| parse_costs(s),
        Default::default(),
    )?;
    let threshold = cfg.resolve(
        args.posterior_threshold,
        "posterior-threshold",
        |s| Ok(s.parse()?),
        0.01,
    )?;
    let frame_rate = cfg.resolve(args.frame_rate, "frame-rate", |s| Ok(s.parse()?), 0.01)?;

    let segments = parse_stm(&read_file(&args.stm)?)?;
    if segments.len() != args.lattices.len() {
        bail!(
            "{} reference segments but {} lattices; they pair by position",
            segments.len(),
            args.lattices.len()
        );
    }
    let rules = match &args.glm {
        Some(path) => promote_expansions(&parse_glm(&read_file(path)?)?),
        None => Vec::new(),
    };
    let references: Vec<AltNetwork> = apply_glm_to_reference(&segments, &rules);

    // Deepest request first so every truncation has material to cut.
    let max_n = n_values.iter().copied().max().unwrap_or(10);
    let mut docs = Vec::new();
    for (path, seg) in args.lattices.iter().zip(&segments) {
        let ctx = LatticeContext {
            n: max_n,
            threshold,
            silence: Default::default(),
            frame_rate,
            recording: seg.recording_id.clone(),
            channel: seg.channel.clone(),
        };
        let lat = load_lattice(path).with_context(|| format!("lattice {}", path.display()))?;
        docs.push(derive_doc(&lat, level, &ctx)?);
    }

    let inputs: Vec<CurveInput> = references
        .iter()
        .zip(&docs)
        .zip(&segments)
        .map(|((reference, doc), seg)| CurveInput {
            reference,
            doc,
            recording_id: &seg.recording_id,
            channel: &seg.channel,
        })
        .collect();
    let points = oracle_curve_aggregate(&inputs, &n_values, &costs, frame_rate)?;
    let label = match level {
        Level::NBest => "nbest",
        Level::Word => "word",
        Level::Phrase => "phrase",
    };
    let report = CurveReport {
        rows: points.iter().map(|p| CurveRow::new(label, p)).collect(),
    };
    if cfg.resolve_bool(args.json, "json")? {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_table());
    }
    Ok(())
}
