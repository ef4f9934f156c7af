//! Citing records and the corpora they form.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::Year;

/// One citing publication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Record {
    /// Accession number when the export carries one, otherwise `file:line`.
    pub id: String,
    pub journal: String,
    pub pub_year: Option<Year>,
    pub title: String,
    pub doc_type: String,
    /// Cited-reference strings in export order, never empty strings.
    pub raw_refs: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CorpusCounts {
    pub n_records: usize,
    pub n_raw_refs: usize,
}

/// A set of records with unique ids, plus the names of the files they came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub records: Vec<Record>,
    pub provenance: Vec<String>,
}

impl Corpus {
    pub fn new(records: Vec<Record>, provenance: Vec<String>) -> Self {
        Corpus {
            records,
            provenance,
        }
    }

    pub fn counts(&self) -> CorpusCounts {
        CorpusCounts {
            n_records: self.records.len(),
            n_raw_refs: self.records.iter().map(|r| r.raw_refs.len()).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// All raw cited-reference strings, record by record.
    pub fn raw_refs(&self) -> impl Iterator<Item = &str> {
        self.records
            .iter()
            .flat_map(|r| r.raw_refs.iter().map(String::as_str))
    }
}

/// Unions several corpora, dropping records whose id was already seen.
///
/// Records come out sorted by id and provenance is sorted and deduplicated,
/// so the result does not depend on the order of `parts` as long as records
/// sharing an id are identical. When they differ the copy from the earliest
/// part wins.
pub fn merge_corpora(parts: &[Corpus]) -> Corpus {
    let mut by_id: BTreeMap<&str, &Record> = BTreeMap::new();
    let mut provenance = BTreeSet::new();
    for part in parts {
        provenance.extend(part.provenance.iter().cloned());
        for record in &part.records {
            by_id.entry(record.id.as_str()).or_insert(record);
        }
    }
    Corpus {
        records: by_id.into_values().cloned().collect(),
        provenance: provenance.into_iter().collect(),
    }
}
