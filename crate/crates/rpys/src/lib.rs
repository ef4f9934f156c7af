//! File formats and command-line front end for referenced publication year
//! spectroscopy. The analysis itself lives in `rpys_core`.

pub mod cli;
pub mod config;
pub mod export;
pub mod ingest;
pub mod report;

pub use rpys_core as core;

/// Calendar year of the local clock, used for year validity checks.
pub fn current_year() -> rpys_core::Year {
    use chrono::Datelike;
    chrono::Utc::now().year()
}
