//! Run configuration: TOML file, command-line overrides and built-in
//! defaults, resolved in that order of precedence (flag > file > default).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rpys_core::classify::{DEFAULT_MARKER_SOURCES, DEFAULT_MIN_YEAR, DEFAULT_TITLE_TERMS};
use rpys_core::spectroscopy::DEFAULT_HALF_WIDTH;
use rpys_core::{Classic, ClassifierConfig, CriteriaMode, GenSpec, MatchPolicy, YearRange};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const DEFAULT_PEAKS: usize = 10;
pub const DEFAULT_MIN_DEV: f64 = 0.0;
pub const DEFAULT_TOP_WORKS: usize = 5;
pub const DEFAULT_JOBS: usize = 1;
pub const DEFAULT_OUT: &str = "rpys-out";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config {path}: {message}")]
    Syntax { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// Referenced-year window: fixed bounds, or whatever the data covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowSpec {
    Fixed(YearRange),
    Full,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec::Fixed(YearRange::historical())
    }
}

impl FromStr for WindowSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "full" {
            return Ok(WindowSpec::Full);
        }
        let bad = || ConfigError::Invalid(format!("window {s:?} is not MIN:MAX or \"full\""));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let min = a.trim().parse().map_err(|_| bad())?;
        let max = b.trim().parse().map_err(|_| bad())?;
        YearRange::new(min, max)
            .map(WindowSpec::Fixed)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

impl std::fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WindowSpec::Fixed(range) => write!(f, "{range}"),
            WindowSpec::Full => f.write_str("full"),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierSection {
    pub title_terms: Option<Vec<String>>,
    pub marker_sources: Option<Vec<String>>,
    pub min_year: Option<i32>,
    pub mode: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicSection {
    pub rpy: i32,
    pub weight: f64,
    pub cr: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSection {
    pub n_records: Option<usize>,
    pub citing_years: Option<String>,
    pub refs_per_record: Option<[usize; 2]>,
    pub age_peak: Option<u32>,
    pub age_decay: Option<f64>,
    pub degrade_rate: Option<f64>,
    pub journal: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub classics: Vec<ClassicSection>,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub window: Option<String>,
    pub half_width: Option<usize>,
    pub peaks: Option<usize>,
    pub min_dev: Option<f64>,
    #[serde(rename = "match")]
    pub match_policy: Option<String>,
    pub top_works: Option<usize>,
    pub classify: Option<bool>,
    pub per_file: Option<bool>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub classifier: Option<ClassifierSection>,
    pub gen: Option<GenSection>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text).map_err(|message| ConfigError::Syntax {
            path: path.display().to_string(),
            message,
        })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

/// Values given on the command line; `None` means "not given".
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub window: Option<String>,
    pub half_width: Option<usize>,
    pub peaks: Option<usize>,
    pub min_dev: Option<f64>,
    pub match_policy: Option<String>,
    pub top_works: Option<usize>,
    pub classify: bool,
    pub per_file: bool,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub window: WindowSpec,
    pub half_width: usize,
    pub peaks: usize,
    pub min_dev: f64,
    pub policy: MatchPolicy,
    pub top_works: usize,
    pub classify: bool,
    pub per_file: bool,
    pub jobs: usize,
    pub out: PathBuf,
    pub classifier: ClassifierConfig,
    pub gen: GenSpec,
}

fn invalid(e: impl std::fmt::Display) -> ConfigError {
    ConfigError::Invalid(e.to_string())
}

fn resolve_classifier(section: Option<ClassifierSection>) -> Result<ClassifierConfig, ConfigError> {
    let s = section.unwrap_or_default();
    let to_owned = |list: &[&str]| list.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let config = ClassifierConfig {
        title_terms: s
            .title_terms
            .unwrap_or_else(|| to_owned(DEFAULT_TITLE_TERMS))
            .into_iter()
            .map(|t| t.to_lowercase())
            .collect(),
        marker_sources: s
            .marker_sources
            .unwrap_or_else(|| to_owned(DEFAULT_MARKER_SOURCES)),
        min_year: s.min_year.unwrap_or(DEFAULT_MIN_YEAR),
        mode: s
            .mode
            .as_deref()
            .map(CriteriaMode::from_str)
            .transpose()
            .map_err(invalid)?
            .unwrap_or_default(),
    };
    config.validate().map_err(invalid)?;
    Ok(config)
}

fn resolve_gen(section: Option<GenSection>, seed: Option<u64>) -> Result<GenSpec, ConfigError> {
    let s = section.unwrap_or_default();
    let d = GenSpec::default();
    let citing_years = match s
        .citing_years
        .as_deref()
        .map(WindowSpec::from_str)
        .transpose()?
    {
        None => d.citing_years,
        Some(WindowSpec::Fixed(r)) => r,
        Some(WindowSpec::Full) => return Err(invalid("gen.citing_years needs MIN:MAX")),
    };
    let spec = GenSpec {
        n_records: s.n_records.unwrap_or(d.n_records),
        citing_years,
        refs_per_record: s
            .refs_per_record
            .map(|[a, b]| (a, b))
            .unwrap_or(d.refs_per_record),
        age_peak: s.age_peak.unwrap_or(d.age_peak),
        age_decay: s.age_decay.unwrap_or(d.age_decay),
        classics: s
            .classics
            .into_iter()
            .map(|c| Classic {
                rpy: c.rpy,
                weight: c.weight,
                cr: c.cr,
            })
            .collect(),
        degrade_rate: s.degrade_rate.unwrap_or(d.degrade_rate),
        journal: s.journal.unwrap_or(d.journal),
        seed: seed.or(s.seed).unwrap_or(d.seed),
    };
    spec.validate().map_err(invalid)?;
    Ok(spec)
}

impl RunConfig {
    pub fn resolve(
        inputs: Vec<PathBuf>,
        file: FileConfig,
        cli: Overrides,
    ) -> Result<Self, ConfigError> {
        let window = match cli.window.or(file.window) {
            Some(w) => w.parse()?,
            None => WindowSpec::default(),
        };
        let policy = match cli.match_policy.or(file.match_policy) {
            Some(p) => p.parse().map_err(invalid)?,
            None => MatchPolicy::Exact,
        };
        let config = RunConfig {
            inputs,
            window,
            half_width: cli
                .half_width
                .or(file.half_width)
                .unwrap_or(DEFAULT_HALF_WIDTH),
            peaks: cli.peaks.or(file.peaks).unwrap_or(DEFAULT_PEAKS),
            min_dev: cli.min_dev.or(file.min_dev).unwrap_or(DEFAULT_MIN_DEV),
            policy,
            top_works: cli
                .top_works
                .or(file.top_works)
                .unwrap_or(DEFAULT_TOP_WORKS),
            classify: cli.classify || file.classify.unwrap_or(false),
            per_file: cli.per_file || file.per_file.unwrap_or(false),
            jobs: cli.jobs.or(file.jobs).unwrap_or(DEFAULT_JOBS),
            out: cli
                .out
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            classifier: resolve_classifier(file.classifier)?,
            gen: resolve_gen(file.gen, cli.seed.or(file.seed))?,
        };
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<(), ConfigError> {
        if self.half_width == 0 {
            return Err(invalid("half-width must be at least 1"));
        }
        if self.peaks == 0 {
            return Err(invalid("peaks must be at least 1"));
        }
        if !self.min_dev.is_finite() || self.min_dev < 0.0 {
            return Err(invalid(format!(
                "min-dev {} must be a finite value >= 0",
                self.min_dev
            )));
        }
        if self.top_works == 0 {
            return Err(invalid("top-works must be at least 1"));
        }
        if self.jobs == 0 {
            return Err(invalid("jobs must be at least 1"));
        }
        Ok(())
    }

    /// Settings that influence output content, one `key=value` per line.
    /// Paths, `jobs` and the output directory are left out.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "window={}", self.window);
        let _ = writeln!(s, "half_width={}", self.half_width);
        let _ = writeln!(s, "peaks={}", self.peaks);
        let _ = writeln!(s, "min_dev={}", self.min_dev);
        let _ = writeln!(s, "match={}", self.policy.as_str());
        let _ = writeln!(s, "top_works={}", self.top_works);
        let _ = writeln!(s, "classify={}", self.classify);
        let _ = writeln!(s, "per_file={}", self.per_file);
        let c = &self.classifier;
        let _ = writeln!(s, "classifier.title_terms={:?}", c.title_terms);
        let _ = writeln!(s, "classifier.marker_sources={:?}", c.marker_sources);
        let _ = writeln!(s, "classifier.min_year={}", c.min_year);
        let _ = writeln!(s, "classifier.mode={}", c.mode.as_str());
        let g = &self.gen;
        let _ = writeln!(
            s,
            "gen={} {} {:?} {} {} {} {:?} {}",
            g.n_records,
            g.citing_years,
            g.refs_per_record,
            g.age_peak,
            g.age_decay,
            g.degrade_rate,
            g.journal,
            g.seed
        );
        for c in &g.classics {
            let _ = writeln!(s, "gen.classic={} {} {:?}", c.rpy, c.weight, c.cr);
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of [`RunConfig::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        hex::encode(&digest[..8])
    }
}
