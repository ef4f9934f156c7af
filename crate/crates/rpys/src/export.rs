//! Writing corpora back out as tab-delimited exports.

use std::io::{self, Write};
use std::path::Path;

use rpys_core::Corpus;

use crate::ingest::CR_SEPARATOR;

const HEADER: &str = "PT\tTI\tSO\tDT\tPY\tCR\tUT";

fn clean(field: &str) -> String {
    field.replace(['\t', '\r', '\n'], " ")
}

/// Renders `corpus` in the tab-delimited layout read by [`crate::ingest`].
pub fn export_string(corpus: &Corpus) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in &corpus.records {
        let refs: Vec<String> = r.raw_refs.iter().map(|s| clean(s)).collect();
        let year = r.pub_year.map(|y| y.to_string()).unwrap_or_default();
        let fields = [
            "J".to_owned(),
            clean(&r.title),
            clean(&r.journal),
            clean(&r.doc_type),
            year,
            refs.join(CR_SEPARATOR),
            clean(&r.id),
        ];
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}

pub fn write_export(corpus: &Corpus, path: &Path) -> io::Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    file.write_all(export_string(corpus).as_bytes())?;
    file.flush()
}
