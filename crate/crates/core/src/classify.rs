//! Splitting a journal corpus into a topical subset and the remainder.
//!
//! A record from `min_year` onwards joins the subset when its title contains
//! one of the configured terms or when it cites one of the marker sources
//! (`mode = Any`); `mode = All` requires both. Earlier or undated records
//! are set aside as excluded.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::refnorm::{parse_ref, sources_match, ParseOptions};
use crate::spectroscopy::{share, Share};
use crate::{Corpus, Error, Record, Result, Year};

pub const DEFAULT_TITLE_TERMS: &[&str] = &[
    "citation",
    "bibliometric",
    "scientometric",
    "informetric",
    "webometric",
    "impact factor",
    "h-index",
    "co-citation",
];

pub const DEFAULT_MARKER_SOURCES: &[&str] = &["SCIENTOMETRICS", "J INFORMETR"];

pub const DEFAULT_MIN_YEAR: Year = 1982;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum CriteriaMode {
    /// Title term or marker reference.
    #[default]
    Any,
    /// Title term and marker reference.
    All,
}

impl CriteriaMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CriteriaMode::Any => "any",
            CriteriaMode::All => "all",
        }
    }
}

impl core::str::FromStr for CriteriaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(CriteriaMode::Any),
            "all" => Ok(CriteriaMode::All),
            other => Err(Error::InvalidConfig(alloc::format!(
                "unknown criteria mode {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierConfig {
    /// Lowercase substrings searched in lowercased titles.
    pub title_terms: Vec<String>,
    pub marker_sources: Vec<String>,
    pub min_year: Year,
    pub mode: CriteriaMode,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            title_terms: DEFAULT_TITLE_TERMS.iter().map(|s| s.to_string()).collect(),
            marker_sources: DEFAULT_MARKER_SOURCES
                .iter()
                .map(|s| s.to_string())
                .collect(),
            min_year: DEFAULT_MIN_YEAR,
            mode: CriteriaMode::Any,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        if self.title_terms.iter().all(|t| t.trim().is_empty()) {
            return Err(Error::InvalidConfig("title_terms is empty".into()));
        }
        if self.marker_sources.iter().all(|s| s.trim().is_empty()) {
            return Err(Error::InvalidConfig("marker_sources is empty".into()));
        }
        Ok(())
    }

    fn title_hit(&self, title: &str) -> bool {
        let title = title.to_lowercase();
        self.title_terms
            .iter()
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .any(|t| title.contains(&t.to_lowercase()))
    }

    fn marker_hit(&self, record: &Record, options: &ParseOptions) -> bool {
        record.raw_refs.iter().any(|raw| {
            parse_ref(raw, options)
                .source
                .is_some_and(|src| self.marker_sources.iter().any(|m| sources_match(m, &src)))
        })
    }

    /// Whether a record that passed the year gate belongs to the subset.
    pub fn matches(&self, record: &Record, options: &ParseOptions) -> bool {
        match self.mode {
            CriteriaMode::Any => self.title_hit(&record.title) || self.marker_hit(record, options),
            CriteriaMode::All => self.title_hit(&record.title) && self.marker_hit(record, options),
        }
    }
}

/// Record ids split three ways, each list in corpus order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Partition {
    pub in_set: Vec<String>,
    pub out_set: Vec<String>,
    pub excluded: Vec<String>,
}

pub fn classify_corpus(
    corpus: &Corpus,
    config: &ClassifierConfig,
    options: &ParseOptions,
) -> Result<Partition> {
    config.validate()?;
    let mut partition = Partition::default();
    for record in &corpus.records {
        let target = match record.pub_year {
            Some(y) if y >= config.min_year => {
                if config.matches(record, options) {
                    &mut partition.in_set
                } else {
                    &mut partition.out_set
                }
            }
            _ => &mut partition.excluded,
        };
        target.push(record.id.clone());
    }
    Ok(partition)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShareRow {
    pub year: Year,
    pub n_in: u64,
    pub n_total: u64,
    pub share: Share,
}

/// Subset size against classified total per citing year, ascending. Years
/// without classified records are left out.
pub fn subset_share_series(partition: &Partition, corpus: &Corpus) -> Vec<ShareRow> {
    let years: BTreeMap<&str, Year> = corpus
        .records
        .iter()
        .filter_map(|r| Some((r.id.as_str(), r.pub_year?)))
        .collect();
    let mut tally: BTreeMap<Year, (u64, u64)> = BTreeMap::new();
    for (ids, inside) in [(&partition.in_set, true), (&partition.out_set, false)] {
        for id in ids {
            if let Some(&year) = years.get(id.as_str()) {
                let entry = tally.entry(year).or_default();
                entry.1 += 1;
                if inside {
                    entry.0 += 1;
                }
            }
        }
    }
    tally
        .into_iter()
        .map(|(year, (n_in, n_total))| ShareRow {
            year,
            n_in,
            n_total,
            share: share(n_in, n_total).expect("n_total >= 1 and n_in <= n_total"),
        })
        .collect()
}
