use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::Args;

use altscore_core::formats::{
    parse_lattice, write_ctm_with_alts, write_phrase_alts, Lattice, PhraseAlternativesDoc,
};
use altscore_core::lattice_ops::{
    connect, detect_phrase_boundaries, forward_backward, nbest, phrase_alternatives,
    word_alternatives, SilenceSet,
};

use super::{emit, parse_n, read_file};
use crate::config::Config;

/// Alternative level derived from a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    NBest,
    Word,
    Phrase,
}

impl Level {
    pub fn parse(raw: &str) -> Result<Level> {
        match raw {
            "nbest" => Ok(Level::NBest),
            "word" => Ok(Level::Word),
            "phrase" => Ok(Level::Phrase),
            other => bail!("expected nbest|word|phrase, got {other:?}"),
        }
    }
}

/// Flags shared by the lattice subcommands.
#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Input lattice file.
    pub lattice: PathBuf,

    /// Alternative depth; `inf` for all.
    #[arg(long, value_name = "N")]
    pub n: Option<String>,

    /// Arc posterior threshold for phrase boundary detection.
    #[arg(long, value_name = "P")]
    pub posterior_threshold: Option<f64>,

    /// Extra labels to treat as silence, comma separated.
    #[arg(long, value_name = "LABELS")]
    pub silence_labels: Option<String>,

    /// Seconds per frame.
    #[arg(long, value_name = "RATE")]
    pub frame_rate: Option<f64>,

    /// Recording id for CTM output; defaults to the lattice file stem.
    #[arg(long, value_name = "ID")]
    pub recording: Option<String>,

    /// Channel for CTM output.
    #[arg(long, value_name = "CH")]
    pub channel: Option<String>,

    /// Output syntax: ctm (ALT blocks) or doc (phrase-alternatives).
    #[arg(long, value_name = "FORMAT")]
    pub emit: Option<String>,

    /// Output file; stdout when omitted.
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

pub struct LatticeContext {
    pub n: usize,
    pub threshold: f64,
    pub silence: SilenceSet,
    pub frame_rate: f64,
    pub recording: String,
    pub channel: String,
}

impl LatticeArgs {
    pub fn context(&self, cfg: &Config) -> Result<LatticeContext> {
        let n = cfg.resolve(
            self.n.as_deref().map(parse_n).transpose()?,
            "n",
            |s| parse_n(s),
            10,
        )?;
        let threshold = cfg.resolve(
            self.posterior_threshold,
            "posterior-threshold",
            |s| Ok(s.parse()?),
            0.01,
        )?;
        let silence = match cfg.resolve(
            self.silence_labels.clone(),
            "silence-labels",
            |s| Ok(s.to_string()),
            String::new(),
        )? {
            s if s.is_empty() => SilenceSet::default(),
            s => SilenceSet::from_labels(&s.split(',').map(str::trim).collect::<Vec<_>>()),
        };
        let frame_rate =
            cfg.resolve(self.frame_rate, "frame-rate", |s| Ok(s.parse()?), 0.01)?;
        let recording = cfg.resolve(
            self.recording.clone(),
            "recording",
            |s| Ok(s.to_string()),
            file_stem(&self.lattice),
        )?;
        let channel = cfg.resolve(
            self.channel.clone(),
            "channel",
            |s| Ok(s.to_string()),
            "A".to_string(),
        )?;
        Ok(LatticeContext {
            n,
            threshold,
            silence,
            frame_rate,
            recording,
            channel,
        })
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "utt".to_string())
}

pub fn load_lattice(path: &Path) -> Result<Lattice> {
    let lat = parse_lattice(&read_file(path)?)?;
    Ok(connect(&lat)?)
}

/// Derive the requested level; shared with `oracle-score`.
pub fn derive_doc(lat: &Lattice, level: Level, ctx: &LatticeContext) -> Result<PhraseAlternativesDoc> {
    match level {
        Level::NBest => {
            let list = nbest(lat, ctx.n, &ctx.silence)?;
            Ok(list.to_phrase_doc(lat.min_frame(), lat.max_frame()))
        }
        Level::Phrase | Level::Word => {
            let post = forward_backward(lat)?;
            let boundaries = detect_phrase_boundaries(lat, &post, ctx.threshold, &ctx.silence);
            let doc = phrase_alternatives(lat, &boundaries, ctx.n, &ctx.silence)?;
            match level {
                Level::Word => Ok(word_alternatives(&doc).0),
                _ => Ok(doc),
            }
        }
    }
}

pub fn run(args: &LatticeArgs, level: Level, cfg: &Config) -> Result<()> {
    let ctx = args.context(cfg)?;
    let lat = load_lattice(&args.lattice)?;
    let doc = derive_doc(&lat, level, &ctx)?;
    let default_emit = match level {
        Level::NBest => "ctm",
        _ => "doc",
    };
    let emit_format = cfg.resolve(
        args.emit.clone(),
        "emit",
        |s| Ok(s.to_string()),
        default_emit.to_string(),
    )?;
    let text = match emit_format.as_str() {
        "ctm" => write_ctm_with_alts(&doc, &ctx.recording, &ctx.channel, ctx.frame_rate),
        "doc" => write_phrase_alts(&doc),
        other => bail!("expected ctm|doc, got {other:?}"),
    };
    emit(args.output.as_ref(), &text)
}
