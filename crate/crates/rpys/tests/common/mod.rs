#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rpys::export::write_export;
use rpys_core::{Corpus, Record};

pub const PRICE: &str = "PRICE DJD, 1963, LITTLE SCI BIG SCI";
pub const KESSLER: &str = "KESSLER MM, 1963, AM DOC, V14, P10";
pub const GARFIELD_SHER: &str = "GARFIELD E, 1963, AM DOC, V14, P195";
pub const GARFIELD: &str = "GARFIELD E, 1963, AM DOC, V14, P289";
pub const LOTKA: &str = "LOTKA AJ, 1926, J WASHINGTON ACAD SC, V16, P317";
pub const LOTKA_SHORT: &str = "LOTKA AJ, 1926";
pub const BRADFORD: &str = "BRADFORD SC, 1934, ENGINEERING-LONDON, V137, P85";
pub const BRADFORD_SHORT: &str = "BRADFORD SC, 1934, ENGINEERING";

fn repeat(out: &mut Vec<String>, raw: &str, n: usize) {
    out.extend(std::iter::repeat_n(raw.to_owned(), n));
}

fn singletons(out: &mut Vec<String>, year: i32, n: usize) {
    out.extend((0..n).map(|i| {
        format!(
            "HIST{year}N{i:03} X, {year}, J HIST {}, V{}, P{}",
            i % 9,
            i + 1,
            i + 3
        )
    }));
}

/// Background of `5 + 2 * (year - 1900)` distinct works per year from 1900
/// to 1970, with three classic-heavy years:
///
/// * 1963: 659 references, 213 + 82 + 41 + 17 to four works, 306 singletons
/// * 1926: 208 references, 184 complete + 7 incomplete to one work, 17 singletons
/// * 1934: 136 references, 99 complete + 7 incomplete to one work, 30 singletons
///
/// plus references outside the window and undated ones.
pub fn three_peak_refs() -> Vec<String> {
    let mut refs = Vec::new();
    for year in 1900..=1970 {
        match year {
            1963 => {
                repeat(&mut refs, PRICE, 213);
                repeat(&mut refs, KESSLER, 82);
                repeat(&mut refs, GARFIELD_SHER, 41);
                repeat(&mut refs, GARFIELD, 17);
                singletons(&mut refs, year, 659 - 353);
            }
            1926 => {
                repeat(&mut refs, LOTKA, 184);
                repeat(&mut refs, LOTKA_SHORT, 7);
                singletons(&mut refs, year, 17);
            }
            1934 => {
                repeat(&mut refs, BRADFORD, 99);
                repeat(&mut refs, BRADFORD_SHORT, 7);
                singletons(&mut refs, year, 30);
            }
            _ => singletons(&mut refs, year, 5 + 2 * (year - 1900) as usize),
        }
    }
    singletons(&mut refs, 1850, 4);
    singletons(&mut refs, 1985, 40);
    repeat(&mut refs, "ANONYMOUS", 3);
    refs
}

/// Spreads [`three_peak_refs`] round-robin over `n_records` citing records.
pub fn three_peak_corpus(n_records: usize) -> Corpus {
    let refs = three_peak_refs();
    let journals = ["SCIENTOMETRICS", "J INFORMETR", "J AM SOC INF SCI TEC"];
    let mut records: Vec<Record> = (0..n_records)
        .map(|i| Record {
            id: format!("WOS:{i:015}"),
            journal: journals[i % 3].to_owned(),
            pub_year: Some(1982 + (i % 31) as i32),
            title: format!("Citing paper {i}"),
            doc_type: "Article".to_owned(),
            raw_refs: Vec::new(),
        })
        .collect();
    for (i, raw) in refs.into_iter().enumerate() {
        records[i % n_records].raw_refs.push(raw);
    }
    Corpus::new(records, vec![])
}

pub fn write_corpus(dir: &Path, name: &str, corpus: &Corpus) -> PathBuf {
    let path = dir.join(name);
    write_export(corpus, &path).unwrap();
    path
}

/// A 20-row tab-delimited export whose rows 5, 11 and 17 are broken: a
/// truncated row, a row with an extra column, and a non-numeric year.
pub fn export_with_three_bad_rows() -> String {
    let mut text = String::from("PT\tAU\tTI\tSO\tPY\tCR\tUT\n");
    for i in 1..=20 {
        let row = match i {
            5 => "J\tBROKEN\ttruncated row".to_owned(),
            11 => format!("J\tX\tExtra\tSCIENTOMETRICS\t1999\tA X, 1950, B\tWOS:{i:04}\tstray"),
            17 => format!("J\tY\tBad year\tSCIENTOMETRICS\tMCMXC\tA X, 1950, B\tWOS:{i:04}"),
            _ => format!(
                "J\tAUTHOR {i}\tPaper {i}\tSCIENTOMETRICS\t{}\tLOTKA AJ, 1926, J WASHINGTON ACAD SC, V16, P317; PRICE DJD, 1963, LITTLE SCI BIG SCI\tWOS:{i:04}",
                1990 + i
            ),
        };
        text.push_str(&row);
        text.push('\n');
    }
    text
}

pub fn rpys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpys"))
        .args(args)
        .output()
        .expect("rpys binary runs")
}

pub fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

pub fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}
