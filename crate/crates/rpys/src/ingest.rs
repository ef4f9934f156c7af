//! Web of Science export readers.
//!
//! Two layouts are accepted. The tab-delimited export has a header row
//! naming field tags (optionally preceded by `FN`/`VR` lines) and one record
//! per row, with cited references joined by `"; "`. The field-tagged plain
//! text export starts with `FN ` and lists one tag per line, continuation
//! lines indented, records closed by `ER`.
//!
//! Bad rows never abort a read: they are skipped and reported as
//! [`IngestWarning`]s. Only unreadable input or a header without both `CR`
//! and `PY` is fatal.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rpys_core::{Corpus, Record, Year, YearRange};
use thiserror::Error;

/// Separator between cited references inside a `CR` field.
pub const CR_SEPARATOR: &str = "; ";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: header has neither a CR nor a PY column")]
    MissingColumns { file: String },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestOptions {
    /// Accepted publication years.
    pub valid_years: YearRange,
}

impl IngestOptions {
    pub fn for_current_year(current_year: Year) -> Self {
        IngestOptions {
            valid_years: YearRange::validity(current_year),
        }
    }
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions::for_current_year(crate::current_year())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarningKind {
    /// The row was skipped.
    Malformed,
    /// The row repeated an id seen earlier; the earlier record was kept.
    DuplicateId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestWarning {
    pub file: String,
    pub line: usize,
    pub kind: WarningKind,
    pub reason: String,
}

impl fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WARN {}:{}: {}", self.file, self.line, self.reason)
    }
}

/// A corpus plus everything noticed while reading it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub corpus: Corpus,
    pub warnings: Vec<IngestWarning>,
    /// Data rows (tab format) or records (tagged format) encountered.
    pub rows_in: usize,
}

impl IngestReport {
    pub fn skipped(&self) -> usize {
        self.warnings
            .iter()
            .filter(|w| w.kind == WarningKind::Malformed)
            .count()
    }

    pub fn duplicates(&self) -> usize {
        self.warnings
            .iter()
            .filter(|w| w.kind == WarningKind::DuplicateId)
            .count()
    }
}

/// Records of one file, each with the line it started on.
#[derive(Debug, Default)]
struct FileParse {
    name: String,
    records: Vec<(usize, Record)>,
    warnings: Vec<IngestWarning>,
    rows_in: usize,
}

impl FileParse {
    fn new(name: &str) -> Self {
        FileParse {
            name: name.to_owned(),
            ..FileParse::default()
        }
    }

    fn skip(&mut self, line: usize, reason: String) {
        self.warnings.push(IngestWarning {
            file: self.name.clone(),
            line,
            kind: WarningKind::Malformed,
            reason,
        });
    }
}

fn decode(bytes: &[u8]) -> String {
    let text = String::from_utf8_lossy(bytes);
    text.strip_prefix('\u{FEFF}').unwrap_or(&text).to_owned()
}

/// Parses one export read from `input`; `name` labels warnings and default ids.
pub fn parse_export<R: Read>(
    name: &str,
    mut input: R,
    options: &IngestOptions,
) -> Result<IngestReport, IngestError> {
    let mut bytes = Vec::new();
    input
        .read_to_end(&mut bytes)
        .map_err(|source| IngestError::Io {
            path: name.to_owned(),
            source,
        })?;
    Ok(combine(vec![parse_bytes(name, &bytes, options)?]))
}

/// Parses several in-memory exports as one corpus. Ids repeated across
/// inputs keep their first occurrence.
pub fn parse_exports(
    inputs: &[(String, Vec<u8>)],
    options: &IngestOptions,
) -> Result<IngestReport, IngestError> {
    let parsed = inputs
        .iter()
        .map(|(n, b)| parse_bytes(n, b, options))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(combine(parsed))
}

/// Reads and parses files, up to `jobs` at a time. The result is the same
/// for any `jobs`.
pub fn read_exports(
    paths: &[PathBuf],
    options: &IngestOptions,
    jobs: usize,
) -> Result<IngestReport, IngestError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| IngestError::Pool(e.to_string()))?;
    let parsed: Vec<FileParse> = pool.install(|| {
        paths
            .par_iter()
            .map(|p| read_file(p, options))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(combine(parsed))
}

/// Reads and parses a single file.
pub fn read_export(path: &Path, options: &IngestOptions) -> Result<IngestReport, IngestError> {
    Ok(combine(vec![read_file(path, options)?]))
}

fn read_file(path: &Path, options: &IngestOptions) -> Result<FileParse, IngestError> {
    let name = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: name.clone(),
        source,
    })?;
    parse_bytes(&name, &bytes, options)
}

fn combine(parts: Vec<FileParse>) -> IngestReport {
    let mut seen = HashSet::new();
    let mut report = IngestReport::default();
    for part in parts {
        report.rows_in += part.rows_in;
        report.warnings.extend(part.warnings);
        report.corpus.provenance.push(part.name.clone());
        for (line, record) in part.records {
            if seen.contains(&record.id) {
                report.warnings.push(IngestWarning {
                    file: part.name.clone(),
                    line,
                    kind: WarningKind::DuplicateId,
                    reason: format!("duplicate record id {}", record.id),
                });
            } else {
                seen.insert(record.id.clone());
                report.corpus.records.push(record);
            }
        }
    }
    report
}

fn parse_bytes(
    name: &str,
    bytes: &[u8],
    options: &IngestOptions,
) -> Result<FileParse, IngestError> {
    let text = decode(bytes);
    let lines: Vec<&str> = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    let first = lines.iter().position(|l| !l.trim().is_empty());
    let Some(first) = first else {
        return Ok(FileParse::new(name));
    };
    if lines[first].starts_with("FN ") {
        let body = lines[first..]
            .iter()
            .position(|l| !l.trim().is_empty() && !l.starts_with("FN ") && !l.starts_with("VR "))
            .map(|i| i + first);
        match body {
            Some(i) if lines[i].contains('\t') => parse_tabbed(name, &lines, i, options),
            _ => Ok(parse_tagged(name, &lines, first, options)),
        }
    } else {
        parse_tabbed(name, &lines, first, options)
    }
}

fn parse_year(value: &str, options: &IngestOptions) -> Result<Option<Year>, String> {
    let value = value.trim();
    if value.is_empty() {
        return Ok(None);
    }
    match value.parse::<Year>() {
        Ok(y) if options.valid_years.contains(y) => Ok(Some(y)),
        Ok(y) => Err(format!("PY {y} outside {}", options.valid_years)),
        Err(_) => Err(format!("PY {value:?} is not a year")),
    }
}

fn split_refs(cr: &str) -> Vec<String> {
    cr.split(CR_SEPARATOR)
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Default)]
struct Columns {
    ut: Option<usize>,
    pt: Option<usize>,
    dt: Option<usize>,
    ti: Option<usize>,
    so: Option<usize>,
    py: Option<usize>,
    cr: Option<usize>,
}

fn parse_tabbed(
    name: &str,
    lines: &[&str],
    header_at: usize,
    options: &IngestOptions,
) -> Result<FileParse, IngestError> {
    let mut header: Vec<&str> = lines[header_at].split('\t').map(str::trim).collect();
    while header.len() > 1 && header.last() == Some(&"") {
        header.pop();
    }
    let find = |tag: &str| header.iter().position(|h| *h == tag);
    let cols = Columns {
        ut: find("UT"),
        pt: find("PT"),
        dt: find("DT"),
        ti: find("TI"),
        so: find("SO"),
        py: find("PY"),
        cr: find("CR"),
    };
    if cols.cr.is_none() && cols.py.is_none() {
        return Err(IngestError::MissingColumns {
            file: name.to_owned(),
        });
    }

    let mut out = FileParse::new(name);
    for (offset, raw_line) in lines[header_at + 1..].iter().enumerate() {
        let line_no = header_at + offset + 2;
        if raw_line.trim().is_empty() || raw_line.trim() == "EF" {
            continue;
        }
        out.rows_in += 1;
        let mut fields: Vec<&str> = raw_line.split('\t').collect();
        while fields.len() > header.len() && fields.last().is_some_and(|f| f.trim().is_empty()) {
            fields.pop();
        }
        if fields.len() != header.len() {
            out.skip(
                line_no,
                format!("expected {} fields, found {}", header.len(), fields.len()),
            );
            continue;
        }
        let get = |col: Option<usize>| col.map(|i| fields[i].trim()).unwrap_or("");
        let pub_year = match parse_year(get(cols.py), options) {
            Ok(y) => y,
            Err(reason) => {
                out.skip(line_no, reason);
                continue;
            }
        };
        let id = match get(cols.ut) {
            "" => format!("{name}:{line_no}"),
            ut => ut.to_owned(),
        };
        let doc_type = match get(cols.dt) {
            "" => get(cols.pt),
            dt => dt,
        };
        let record = Record {
            id,
            journal: get(cols.so).to_owned(),
            pub_year,
            title: get(cols.ti).to_owned(),
            doc_type: doc_type.to_owned(),
            raw_refs: split_refs(get(cols.cr)),
        };
        out.records.push((line_no, record));
    }
    Ok(out)
}

/// Fields collected for one record of the field-tagged layout.
#[derive(Default)]
struct TaggedRecord {
    start: usize,
    ut: String,
    pt: String,
    dt: String,
    ti: Vec<String>,
    so: Vec<String>,
    py: String,
    cr: Vec<String>,
}

impl TaggedRecord {
    fn push(&mut self, tag: &str, value: &str) {
        let value = value.trim();
        match tag {
            "UT" => self.ut = value.to_owned(),
            "PT" => self.pt = value.to_owned(),
            "DT" => self.dt = value.to_owned(),
            "TI" => self.ti.push(value.to_owned()),
            "SO" => self.so.push(value.to_owned()),
            "PY" => self.py = value.to_owned(),
            "CR" if !value.is_empty() => self.cr.push(value.to_owned()),
            _ => {}
        }
    }
}

fn parse_tagged(name: &str, lines: &[&str], start: usize, options: &IngestOptions) -> FileParse {
    let mut out = FileParse::new(name);
    let mut current: Option<TaggedRecord> = None;
    let mut last_tag = String::new();
    let mut broken: Option<String> = None;

    let finish = |out: &mut FileParse, rec: TaggedRecord, broken: Option<String>| {
        if let Some(reason) = broken {
            out.skip(rec.start, reason);
            return;
        }
        let pub_year = match parse_year(&rec.py, options) {
            Ok(y) => y,
            Err(reason) => return out.skip(rec.start, reason),
        };
        let id = if rec.ut.is_empty() {
            format!("{name}:{}", rec.start)
        } else {
            rec.ut
        };
        let record = Record {
            id,
            journal: rec.so.join(" "),
            pub_year,
            title: rec.ti.join(" "),
            doc_type: if rec.dt.is_empty() { rec.pt } else { rec.dt },
            raw_refs: rec.cr,
        };
        out.records.push((rec.start, record));
    };

    for (offset, line) in lines[start..].iter().enumerate() {
        let line_no = start + offset + 1;
        if line.trim().is_empty() {
            continue;
        }
        let continuation = line.starts_with(' ');
        let (tag, value) = if continuation {
            (last_tag.as_str().to_owned(), line.trim())
        } else {
            let tag = line.get(..2).unwrap_or(line);
            let rest = line.get(2..).unwrap_or("");
            let well_formed = tag
                .chars()
                .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit())
                && (rest.is_empty() || rest.starts_with(' '));
            if !well_formed {
                match current.as_mut() {
                    Some(_) => {
                        broken.get_or_insert_with(|| format!("line {line_no}: not a field line"))
                    }
                    None => {
                        out.skip(line_no, "text outside any record".into());
                        continue;
                    }
                };
                continue;
            }
            (tag.to_owned(), rest.trim())
        };
        match tag.as_str() {
            "FN" | "VR" if current.is_none() => {}
            "EF" => break,
            "PT" if !continuation => {
                if let Some(rec) = current.take() {
                    let reason = broken
                        .take()
                        .unwrap_or_else(|| "record not closed by ER".into());
                    finish(&mut out, rec, Some(reason));
                }
                out.rows_in += 1;
                let mut rec = TaggedRecord {
                    start: line_no,
                    ..TaggedRecord::default()
                };
                rec.push("PT", value);
                current = Some(rec);
            }
            "ER" => match current.take() {
                Some(rec) => finish(&mut out, rec, broken.take()),
                None => out.skip(line_no, "ER without a record".into()),
            },
            _ => match current.as_mut() {
                Some(rec) => rec.push(&tag, value),
                None => out.skip(line_no, format!("{tag} field outside any record")),
            },
        }
        last_tag = tag;
    }
    if let Some(rec) = current.take() {
        let reason = broken
            .take()
            .unwrap_or_else(|| "record not closed by ER".into());
        finish(&mut out, rec, Some(reason));
    }
    out
}
