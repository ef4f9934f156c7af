//! Referenced publication year spectroscopy (RPYS) without IO.
//!
//! The crate turns cited-reference strings into per-year counts, computes
//! the deviation of every year from its local median, finds the peak years
//! and ranks the works that make up each peak. It also partitions a journal
//! corpus into a topical subset and a remainder, and generates seeded
//! synthetic corpora with known historical classics.
//!
//! Everything here is `no_std` + `alloc`. Reading export files, writing
//! reports and the command line live in the `rpys` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod corpus;
mod error;
pub mod generate;
mod halves;
pub mod refnorm;
pub mod spectroscopy;
mod years;

pub use classify::{
    classify_corpus, subset_share_series, ClassifierConfig, CriteriaMode, Partition, ShareRow,
};
pub use corpus::{merge_corpora, Corpus, CorpusCounts, Record};
pub use error::Error;
pub use generate::{generate, Classic, GenSpec};
pub use halves::Halves;
pub use refnorm::{
    extract_rpy, merge_variants, parse_ref, CitedReference, MatchPolicy, ParseOptions, RefKey,
    VariantGroup,
};
pub use spectroscopy::{
    annotate_peak, annotate_peaks, build_spectrum, build_spectrum_from_years, detect_peaks,
    median_deviation, share, Peak, RankedWork, Share, Spectrum, SpectrumRow,
};
pub use years::{Year, YearRange};

pub type Result<T, E = Error> = core::result::Result<T, E>;
