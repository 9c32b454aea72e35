use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use flate2::write::GzEncoder;
use flate2::Compression;

use altscore_core::formats::{parse_ctm, parse_phrase_alts, CtmEntry};
use altscore_core::lattice_ops::depth_stats;
use altscore_core::report::{StatsReport, StatsRow};

use super::read_file;
use crate::config::Config;

/// Depth and size statistics of alternatives documents. Files ending in
/// `.ctm` are read as CTM streams (an ALT block is one position, a plain
/// token a depth-one position); anything else as a phrase-alternatives
/// document.
#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Emit the machine-readable report.
    #[arg(long)]
    json: bool,

    /// Input files.
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

fn depths_of(path: &Path, text: &str) -> Result<Vec<usize>> {
    if path.extension().is_some_and(|e| e == "ctm") {
        let entries = parse_ctm(text)?;
        Ok(entries
            .iter()
            .map(|e| match e {
                CtmEntry::Token(_) => 1,
                CtmEntry::Alt(b) => b.alternatives.len(),
            })
            .collect())
    } else {
        Ok(parse_phrase_alts(text)?.depths())
    }
}

fn gzip_len(text: &str) -> usize {
    let mut enc = GzEncoder::new(Vec::new(), Compression::default());
    enc.write_all(text.as_bytes()).expect("in-memory gzip");
    enc.finish().expect("in-memory gzip").len()
}

pub fn run(args: &StatsArgs, cfg: &Config) -> Result<()> {
    let mut rows = Vec::new();
    for path in &args.files {
        let text = read_file(path)?;
        let depths =
            depths_of(path, &text).with_context(|| format!("parsing {}", path.display()))?;
        let stats = depth_stats(&depths)?;
        rows.push(StatsRow::new(
            path.display().to_string(),
            depths.len(),
            stats,
            text.len(),
            gzip_len(&text),
        ));
    }
    let report = StatsReport { rows };
    if cfg.resolve_bool(args.json, "json")? {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_table());
    }
    Ok(())
}
