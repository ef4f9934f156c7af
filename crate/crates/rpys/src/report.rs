//! Output files: spectrum CSV, peaks JSON, spectrogram SVG and the
//! classification tables. Every writer is deterministic: the same input
//! always produces the same bytes.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use rpys_core::{Halves, Partition, Peak, ShareRow, Spectrum, SpectrumRow};
use serde::Serialize;
use thiserror::Error;

pub const SPECTRUM_HEADER: [&str; 4] = ["year", "count", "median", "deviation"];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot draw an empty spectrum")]
    EmptySpectrum,
    #[error("spectrum csv line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), ReportError> {
    std::fs::write(path, contents).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String, ReportError> {
    let bytes = writer
        .into_inner()
        .map_err(|e| ReportError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is built from utf-8 fields"))
}

/// `year,count,median,deviation`, one row per year ascending, medians and
/// deviations with one decimal.
pub fn spectrum_csv(spectrum: &Spectrum) -> Result<String, ReportError> {
    let mut w = csv_writer();
    w.write_record(SPECTRUM_HEADER)?;
    for row in spectrum.rows() {
        w.write_record([
            row.year.to_string(),
            row.count.to_string(),
            row.median.to_string(),
            row.deviation.to_string(),
        ])?;
    }
    finish(w)
}

pub fn write_spectrum_csv(spectrum: &Spectrum, path: &Path) -> Result<(), ReportError> {
    write_file(path, spectrum_csv(spectrum)?.as_bytes())
}

/// Reads a spectrum CSV back. `half_width` is not stored in the file.
pub fn read_spectrum_csv(text: &str, half_width: usize) -> Result<Spectrum, ReportError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(SPECTRUM_HEADER) {
        return Err(ReportError::Parse {
            line: 1,
            reason: format!("unexpected header {:?}", header.as_slice()),
        });
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let bad = |what: &str| ReportError::Parse {
            line,
            reason: format!("bad {what}"),
        };
        let field = |n: usize| record.get(n).unwrap_or("");
        rows.push(SpectrumRow {
            year: field(0).parse().map_err(|_| bad("year"))?,
            count: field(1).parse().map_err(|_| bad("count"))?,
            median: Halves::parse(field(2)).ok_or_else(|| bad("median"))?,
            deviation: Halves::parse(field(3)).ok_or_else(|| bad("deviation"))?,
        });
    }
    Spectrum::from_rows(rows, half_width).map_err(|e| ReportError::Parse {
        line: 0,
        reason: e.to_string(),
    })
}

#[derive(Serialize)]
struct WorkDoc<'a> {
    author: Option<&'a str>,
    rpy: Option<i32>,
    source: Option<&'a str>,
    volume: Option<u32>,
    page: Option<&'a str>,
    reference: &'a str,
    count: u64,
    share_pct: f64,
}

#[derive(Serialize)]
struct PeakDoc<'a> {
    year: i32,
    count: u64,
    deviation: f64,
    rank: usize,
    top_works: Vec<WorkDoc<'a>>,
}

pub fn peaks_json(peaks: &[Peak]) -> Result<String, ReportError> {
    let docs: Vec<PeakDoc> = peaks
        .iter()
        .map(|p| PeakDoc {
            year: p.year,
            count: p.count,
            deviation: p.deviation.to_f64(),
            rank: p.rank,
            top_works: p
                .top_works
                .iter()
                .map(|w| WorkDoc {
                    author: w.key.author.as_deref(),
                    rpy: w.key.rpy,
                    source: w.key.source.as_deref(),
                    volume: w.key.volume,
                    page: w.key.page.as_deref(),
                    reference: &w.canonical,
                    count: w.count,
                    share_pct: w.share.percent(),
                })
                .collect(),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&docs)?;
    text.push('\n');
    Ok(text)
}

pub fn write_peaks_json(peaks: &[Peak], path: &Path) -> Result<(), ReportError> {
    write_file(path, peaks_json(peaks)?.as_bytes())
}

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;

struct Frame {
    start: i32,
    span: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, year: i32) -> f64 {
        let plot = WIDTH - LEFT - RIGHT;
        if self.span == 0.0 {
            LEFT + plot / 2.0
        } else {
            LEFT + (year - self.start) as f64 / self.span * plot
        }
    }

    fn y(&self, value: f64) -> f64 {
        TOP + (self.y_max - value) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }
}

fn polyline(frame: &Frame, rows: &[SpectrumRow], value: impl Fn(&SpectrumRow) -> f64) -> String {
    rows.iter()
        .map(|r| format!("{:.2},{:.2}", frame.x(r.year), frame.y(value(r))))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Two curves over the referenced years, counts and deviation from the
/// local median, with decade ticks and the peak years written above their
/// counts.
pub fn spectrogram_svg(spectrum: &Spectrum, peaks: &[Peak]) -> Result<String, ReportError> {
    let rows = spectrum.rows();
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        return Err(ReportError::EmptySpectrum);
    };
    let max_count = rows.iter().map(|r| r.count as f64).fold(0.0, f64::max);
    let max_dev = rows
        .iter()
        .map(|r| r.deviation.to_f64())
        .fold(0.0, f64::max);
    let min_dev = rows
        .iter()
        .map(|r| r.deviation.to_f64())
        .fold(0.0, f64::min);
    let frame = Frame {
        start: first.year,
        span: (last.year - first.year) as f64,
        y_min: min_dev.min(0.0),
        y_max: max_count.max(max_dev).max(1.0),
    };
    let bottom = HEIGHT - BOTTOM;
    let right = WIDTH - RIGHT;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">Referenced publication years {}-{}</text>"#,
        WIDTH / 2.0,
        first.year,
        last.year
    );
    let _ = writeln!(svg, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{bottom:.2}"/>"#
    );
    let zero = frame.y(0.0);
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.2}" y1="{zero:.2}" x2="{right:.2}" y2="{zero:.2}" stroke="gray" stroke-dasharray="4 3"/>"#
    );
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="x-ticks" text-anchor="middle">"#);
    for year in (first.year..=last.year).filter(|y| y.rem_euclid(10) == 0) {
        let x = frame.x(year);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}">{year}</text>"#,
            bottom + 5.0,
            bottom + 18.0
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="y-ticks" text-anchor="end">"#);
    let mut y_labels = vec![frame.y_min, 0.0, frame.y_max];
    y_labels.dedup();
    for v in y_labels {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">{v}</text>"#,
            LEFT - 6.0,
            frame.y(v) + 4.0
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(
        svg,
        r##"<polyline class="counts" fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{}"/>"##,
        polyline(&frame, rows, |r| r.count as f64)
    );
    let _ = writeln!(
        svg,
        r##"<polyline class="deviation" fill="none" stroke="#c0392b" stroke-width="1.5" points="{}"/>"##,
        polyline(&frame, rows, |r| r.deviation.to_f64())
    );

    let _ = writeln!(
        svg,
        r#"<g class="peaks" text-anchor="middle" font-weight="bold">"#
    );
    for peak in peaks.iter().filter(|p| spectrum.row(p.year).is_some()) {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            frame.x(peak.year),
            (frame.y(peak.count as f64) - 6.0).max(TOP - 4.0),
            peak.year
        );
    }
    let _ = writeln!(svg, "</g>");

    let legend_y = HEIGHT - 14.0;
    let _ = writeln!(
        svg,
        r##"<g class="legend"><line x1="{LEFT:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke="#1f4e9c" stroke-width="1.5"/><text x="{:.2}" y="{:.2}">cited references</text><line x1="{:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke="#c0392b" stroke-width="1.5"/><text x="{:.2}" y="{:.2}">deviation from {}-year median</text></g>"##,
        LEFT + 20.0,
        LEFT + 26.0,
        legend_y + 4.0,
        LEFT + 160.0,
        LEFT + 180.0,
        LEFT + 186.0,
        legend_y + 4.0,
        2 * spectrum.half_width() + 1
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn render_spectrogram_svg(
    spectrum: &Spectrum,
    peaks: &[Peak],
    path: &Path,
) -> Result<(), ReportError> {
    write_file(path, spectrogram_svg(spectrum, peaks)?.as_bytes())
}

/// `id,class` with class `in`, `out` or `excluded`.
pub fn partition_csv(partition: &Partition) -> Result<String, ReportError> {
    let mut w = csv_writer();
    w.write_record(["id", "class"])?;
    for (ids, class) in [
        (&partition.in_set, "in"),
        (&partition.out_set, "out"),
        (&partition.excluded, "excluded"),
    ] {
        for id in ids {
            w.write_record([id.as_str(), class])?;
        }
    }
    finish(w)
}

pub fn write_partition_csv(partition: &Partition, path: &Path) -> Result<(), ReportError> {
    write_file(path, partition_csv(partition)?.as_bytes())
}

/// `year,n_in,n_total,percentage`.
pub fn share_csv(series: &[ShareRow]) -> Result<String, ReportError> {
    let mut w = csv_writer();
    w.write_record(["year", "n_in", "n_total", "percentage"])?;
    for row in series {
        w.write_record([
            row.year.to_string(),
            row.n_in.to_string(),
            row.n_total.to_string(),
            row.share.to_string(),
        ])?;
    }
    finish(w)
}

pub fn write_share_csv(series: &[ShareRow], path: &Path) -> Result<(), ReportError> {
    write_file(path, share_csv(series)?.as_bytes())
}
