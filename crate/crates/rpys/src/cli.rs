//! The `rpys` command line.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 missing input,
//! 4 I/O failure, 5 unreadable export format, 6 invalid analysis argument.
//! Failures print one JSON line on stderr, e.g.
//! `{"error":"missing_input","exit_code":3,"message":"..."}`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rpys_core::spectroscopy::annotate_peaks;
use rpys_core::{
    build_spectrum, classify_corpus, detect_peaks, generate, merge_corpora, parse_ref,
    subset_share_series, CitedReference, Corpus, ParseOptions, Peak, Spectrum, YearRange,
};
use thiserror::Error;

use crate::config::{ConfigError, FileConfig, Overrides, RunConfig, WindowSpec};
use crate::ingest::{read_exports, IngestError, IngestOptions, IngestReport};
use crate::report::{self, ReportError};

pub const SPECTRUM_FILE: &str = "spectrum.csv";
pub const SPECTROGRAM_FILE: &str = "spectrogram.svg";
pub const PEAKS_FILE: &str = "peaks.json";
pub const PARTITION_FILE: &str = "partition.csv";
pub const SHARE_FILE: &str = "share.csv";

#[derive(Debug, Parser)]
#[command(
    name = "rpys",
    version,
    about = "Referenced publication year spectroscopy for Web of Science exports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-year counts and median deviations (spectrum.csv, spectrogram.svg).
    Spectrum(RunArgs),
    /// Ranked peak years with their most cited works (peaks.json).
    Peaks(RunArgs),
    /// Subset/remainder partition and yearly subset share (partition.csv, share.csv).
    Classify(RunArgs),
    /// Write a seeded synthetic export.
    Gen(GenArgs),
    /// Parse inputs and summarize what was read.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Export files; read as one merged corpus unless --per-file is set.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Referenced-year window MIN:MAX, or "full" for the span of the data [default: 1900:1970]
    #[arg(long, value_name = "MIN:MAX")]
    pub window: Option<String>,
    /// Years on each side of the median window [default: 2]
    #[arg(long, value_name = "N")]
    pub half_width: Option<usize>,
    /// Maximum number of peaks [default: 10]
    #[arg(long, value_name = "K")]
    pub peaks: Option<usize>,
    /// Minimum deviation for a peak [default: 0]
    #[arg(long, value_name = "X")]
    pub min_dev: Option<f64>,
    /// Variant matching for ranked works: exact or fuzzy [default: exact]
    #[arg(long = "match", value_name = "POLICY")]
    pub match_policy: Option<String>,
    /// Works listed per peak [default: 5]
    #[arg(long, value_name = "N")]
    pub top_works: Option<usize>,
    /// Restrict spectrum and peaks to the classified subset [default: off]
    #[arg(long)]
    pub classify: bool,
    /// One output set per input file, in OUT/<file stem>/ [default: off]
    #[arg(long)]
    pub per_file: bool,
    /// Files parsed concurrently [default: 1]
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Output directory [default: rpys-out]
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// TOML configuration file; flags take precedence [default: none]
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// TOML file with a [gen] section [default: none, built-in spec]
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Random seed, overriding the config [default: 0]
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory [default: rpys-out]
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Files parsed concurrently [default: 1]
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// TOML configuration file [default: none]
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("input not found: {0}")]
    MissingInput(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("cannot create {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Analysis(#[from] rpys_core::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::MissingInput(_) => "missing_input",
            CliError::Ingest(IngestError::MissingColumns { .. }) => "format",
            CliError::Ingest(_) | CliError::Report(_) | CliError::Io { .. } => "io",
            CliError::Analysis(_) => "argument",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "config" => 2,
            "missing_input" => 3,
            "io" => 4,
            "format" => 5,
            _ => 6,
        }
    }

    pub fn json_line(&self) -> String {
        serde_json::json!({ "error": self.kind(), "exit_code": self.exit_code(), "message": self.to_string() })
            .to_string()
    }
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    Ok(match path {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    })
}

fn header(err: &mut dyn Write, config: &RunConfig) {
    let _ = writeln!(
        err,
        "# rpys {} config-sha256:{}",
        env!("CARGO_PKG_VERSION"),
        config.hash()
    );
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn ingest(inputs: &[PathBuf], jobs: usize, err: &mut dyn Write) -> Result<IngestReport, CliError> {
    if let Some(missing) = inputs.iter().find(|p| !p.is_file()) {
        return Err(CliError::MissingInput(missing.display().to_string()));
    }
    let report = read_exports(inputs, &IngestOptions::default(), jobs)?;
    for w in &report.warnings {
        let _ = writeln!(err, "{w}");
    }
    Ok(report)
}

/// Everything a spectrum/peaks run derives from one corpus.
pub struct Analysis {
    pub refs: Vec<CitedReference>,
    pub spectrum: Spectrum,
    pub peaks: Vec<Peak>,
}

fn parse_options() -> ParseOptions {
    ParseOptions::for_current_year(crate::current_year())
}

/// Parses the corpus references, builds the spectrum and annotates its peaks.
///
/// When the corpus has no dated reference at all the spectrum is empty
/// rather than a zero-filled window.
pub fn analyze(corpus: &Corpus, config: &RunConfig) -> Result<Analysis, CliError> {
    let options = parse_options();
    let mut corpus = corpus.clone();
    if config.classify {
        let partition = classify_corpus(&corpus, &config.classifier, &options)?;
        let keep: std::collections::HashSet<&str> =
            partition.in_set.iter().map(String::as_str).collect();
        corpus.records.retain(|r| keep.contains(r.id.as_str()));
    }
    let refs: Vec<CitedReference> = corpus
        .raw_refs()
        .map(|raw| parse_ref(raw, &options))
        .collect();
    let dated = refs.iter().filter_map(|r| r.rpy);
    let span = dated.clone().min().zip(dated.max());
    let window = match (config.window, span) {
        (_, None) => None,
        (WindowSpec::Fixed(range), Some(_)) => Some(range),
        (WindowSpec::Full, Some((lo, hi))) => Some(YearRange::new(lo, hi)?),
    };
    let spectrum = match window {
        Some(w) => build_spectrum(&refs, w, config.half_width),
        None => Spectrum::empty(config.half_width),
    };
    let mut peaks = detect_peaks(&spectrum, config.peaks, config.min_dev)?;
    annotate_peaks(&mut peaks, &refs, config.policy, config.top_works)?;
    Ok(Analysis {
        refs,
        spectrum,
        peaks,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Task {
    Spectrum,
    Peaks,
    Classify,
}

fn run_task(
    task: Task,
    corpus: &Corpus,
    config: &RunConfig,
    dir: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    create_dir(dir)?;
    let mut written = Vec::new();
    match task {
        Task::Spectrum => {
            let analysis = analyze(corpus, config)?;
            let csv = dir.join(SPECTRUM_FILE);
            report::write_spectrum_csv(&analysis.spectrum, &csv)?;
            written.push(csv);
            if analysis.spectrum.is_empty() {
                let _ = writeln!(err, "note: no dated references, spectrogram not drawn");
            } else {
                let svg = dir.join(SPECTROGRAM_FILE);
                report::render_spectrogram_svg(&analysis.spectrum, &analysis.peaks, &svg)?;
                written.push(svg);
            }
        }
        Task::Peaks => {
            let analysis = analyze(corpus, config)?;
            let json = dir.join(PEAKS_FILE);
            report::write_peaks_json(&analysis.peaks, &json)?;
            written.push(json);
        }
        Task::Classify => {
            let partition = classify_corpus(corpus, &config.classifier, &parse_options())?;
            let series = subset_share_series(&partition, corpus);
            let part = dir.join(PARTITION_FILE);
            let share = dir.join(SHARE_FILE);
            report::write_partition_csv(&partition, &part)?;
            report::write_share_csv(&series, &share)?;
            written.extend([part, share]);
        }
    }
    for path in written {
        let _ = writeln!(out, "{}", path.display());
    }
    Ok(())
}

fn run_analysis(
    task: Task,
    args: RunArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let file = load_file_config(args.config.as_deref())?;
    let overrides = Overrides {
        window: args.window,
        half_width: args.half_width,
        peaks: args.peaks,
        min_dev: args.min_dev,
        match_policy: args.match_policy,
        top_works: args.top_works,
        classify: args.classify,
        per_file: args.per_file,
        jobs: args.jobs,
        out: args.out,
        seed: None,
    };
    let config = RunConfig::resolve(args.inputs, file, overrides)?;
    header(err, &config);

    if config.per_file {
        let mut used: BTreeMap<String, usize> = BTreeMap::new();
        for input in &config.inputs {
            let report = ingest(std::slice::from_ref(input), config.jobs, err)?;
            let corpus = merge_corpora(&[report.corpus]);
            let stem = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "input".into());
            let n = used.entry(stem.clone()).or_default();
            *n += 1;
            let name = if *n == 1 { stem } else { format!("{stem}-{n}") };
            run_task(task, &corpus, &config, &config.out.join(name), out, err)?;
        }
        Ok(())
    } else {
        let report = ingest(&config.inputs, config.jobs, err)?;
        let corpus = merge_corpora(&[report.corpus]);
        run_task(task, &corpus, &config, &config.out, out, err)
    }
}

fn run_gen(args: GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let file = load_file_config(args.config.as_deref())?;
    let overrides = Overrides {
        seed: args.seed,
        out: args.out,
        ..Overrides::default()
    };
    let config = RunConfig::resolve(Vec::new(), file, overrides)?;
    header(err, &config);
    let corpus = generate(&config.gen)?;
    create_dir(&config.out)?;
    let path = config
        .out
        .join(format!("synthetic-{}.txt", config.gen.seed));
    crate::export::write_export(&corpus, &path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let _ = writeln!(out, "{}", path.display());
    Ok(())
}

fn run_validate(
    args: ValidateArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let file = load_file_config(args.config.as_deref())?;
    let overrides = Overrides {
        jobs: args.jobs,
        ..Overrides::default()
    };
    let config = RunConfig::resolve(args.inputs, file, overrides)?;
    header(err, &config);
    let report = ingest(&config.inputs, config.jobs, err)?;
    let options = parse_options();
    let counts = report.corpus.counts();
    let dated = report
        .corpus
        .raw_refs()
        .filter(|r| parse_ref(r, &options).rpy.is_some())
        .count();
    let _ = writeln!(
        out,
        "files={} rows={} records={} raw_refs={} dated_refs={} undated_refs={} skipped={} duplicates={}",
        config.inputs.len(),
        report.rows_in,
        counts.n_records,
        counts.n_raw_refs,
        dated,
        counts.n_raw_refs - dated,
        report.skipped(),
        report.duplicates()
    );
    Ok(())
}

/// Runs a parsed command line, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(args) => run_analysis(Task::Spectrum, args, out, err),
        Command::Peaks(args) => run_analysis(Task::Peaks, args, out, err),
        Command::Classify(args) => run_analysis(Task::Classify, args, out, err),
        Command::Gen(args) => run_gen(args, out, err),
        Command::Validate(args) => run_validate(args, out, err),
    }
}
