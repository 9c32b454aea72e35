//! Command-line surface for alternative-aware ASR scoring.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 on violated internal
//! invariants.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use crate::commands::lattice::Level;
use crate::config::Config;

#[derive(Debug, Parser)]
#[command(name = "altscore", version, about = "Alternative-aware ASR scoring toolkit")]
struct Cli {
    /// key=value configuration file; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads for per-segment scoring; defaults to all cores.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a hypothesis CTM against a reference STM.
    Score(commands::score::ScoreArgs),
    /// Apply GLM rules and word policies to an STM or CTM file.
    Filter(commands::filter::FilterArgs),
    /// Convert a multi-segment STM into one segment per channel.
    MergeStm(commands::filter::MergeStmArgs),
    /// Extract the n best distinct word sequences from a lattice.
    LatticeNbest(commands::lattice::LatticeArgs),
    /// Derive word-level alternatives from a lattice.
    LatticeWords(commands::lattice::LatticeArgs),
    /// Derive phrase-level alternatives from a lattice.
    LatticePhrases(commands::lattice::LatticeArgs),
    /// Oracle-score lattice alternatives against references.
    OracleScore(commands::oracle::OracleArgs),
    /// Depth and size statistics of alternatives documents.
    Stats(commands::stats::StatsArgs),
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let jobs = cfg.resolve(cli.jobs, "jobs", |s| Ok(s.parse()?), 0)?;
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    match &cli.command {
        Command::Score(args) => commands::score::run(args, &cfg),
        Command::Filter(args) => commands::filter::run(args, &cfg),
        Command::MergeStm(args) => commands::filter::run_merge(args),
        Command::LatticeNbest(args) => commands::lattice::run(args, Level::NBest, &cfg),
        Command::LatticeWords(args) => commands::lattice::run(args, Level::Word, &cfg),
        Command::LatticePhrases(args) => commands::lattice::run(args, Level::Phrase, &cfg),
        Command::OracleScore(args) => commands::oracle::run(args, &cfg),
        Command::Stats(args) => commands::stats::run(args, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let internal = err
                .chain()
                .any(|e| matches!(e.downcast_ref(), Some(altscore_core::Error::Internal(_))));
            if internal {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
