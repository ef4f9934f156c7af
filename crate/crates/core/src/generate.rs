//! Seeded synthetic corpora with a known reference-age structure.
//!
//! Every reference slot of a record is either a classic, picked with the
//! classic's weight as probability, or a background reference whose age
//! below the citing year is `age_peak` plus a geometric tail with rate
//! `age_decay`. Classics are rendered from their canonical strings and
//! sometimes lose their volume and page to produce incomplete variants.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::{Corpus, Error, Record, Result, Year, YearRange};

const EARLIEST_YEAR: Year = 1500;
const AUTHOR_POOL: u32 = 5000;
const SOURCE_POOL: u32 = 60;

/// A historical work injected into the generated reference lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Classic {
    pub rpy: Year,
    /// Probability that any single reference slot cites this work.
    pub weight: f64,
    /// The complete reference string, e.g. `LOTKA AJ, 1926, J WASHINGTON ACAD SC, V16, P317`.
    pub cr: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n_records: usize,
    pub citing_years: YearRange,
    /// Inclusive bounds on references per record.
    pub refs_per_record: (usize, usize),
    pub age_peak: u32,
    pub age_decay: f64,
    pub classics: Vec<Classic>,
    /// Probability that a classic citation drops its volume and page.
    pub degrade_rate: f64,
    pub journal: String,
    pub seed: u64,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            n_records: 500,
            citing_years: YearRange::new(1982, 2012).expect("ordered"),
            refs_per_record: (10, 30),
            age_peak: 3,
            age_decay: 0.1,
            classics: Vec::new(),
            degrade_rate: 0.05,
            journal: "SYNTHETIC J".into(),
            seed: 0,
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.refs_per_record;
        if lo > hi {
            return Err(Error::InvalidSpec(format!(
                "refs_per_record {lo}..{hi} is inverted"
            )));
        }
        if !self.age_decay.is_finite() || self.age_decay <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "age_decay {} must be positive",
                self.age_decay
            )));
        }
        if !(0.0..=1.0).contains(&self.degrade_rate) {
            return Err(Error::InvalidSpec(format!(
                "degrade_rate {} outside [0, 1]",
                self.degrade_rate
            )));
        }
        if self.citing_years.start() < EARLIEST_YEAR {
            return Err(Error::InvalidSpec("citing years before 1500".into()));
        }
        let mut total = 0.0;
        for c in &self.classics {
            if !c.weight.is_finite() || c.weight <= 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "classic {:?} has non-positive weight",
                    c.cr
                )));
            }
            if c.cr.trim().is_empty() || c.cr.contains(['\t', '\n', '\r']) || c.cr.contains("; ") {
                return Err(Error::InvalidSpec(format!(
                    "classic string {:?} cannot be exported",
                    c.cr
                )));
            }
            total += c.weight;
        }
        if total >= 1.0 {
            return Err(Error::InvalidSpec(format!(
                "classic weights sum to {total}, must stay below 1"
            )));
        }
        Ok(())
    }
}

/// Removes volume and page tokens from a reference string.
pub fn degrade(cr: &str) -> String {
    let is_vp = |t: &str| {
        let (head, rest) = t.split_at(t.chars().next().map_or(0, char::len_utf8));
        matches!(head, "V" | "P") && !rest.is_empty() && rest.bytes().any(|b| b.is_ascii_digit())
    };
    cr.split(", ")
        .filter(|t| !is_vp(t))
        .collect::<Vec<_>>()
        .join(", ")
}

fn background_ref(rng: &mut ChaCha8Rng, rpy: Year) -> String {
    let author = rng.random_range(0..AUTHOR_POOL);
    let source = rng.random_range(0..SOURCE_POOL);
    let volume = rng.random_range(1..=120u32);
    let page = rng.random_range(1..=999u32);
    format!("AUTH{author:04} X, {rpy}, J SYNTH {source:02}, V{volume}, P{page}")
}

/// Generates a corpus from a spec. The same spec always yields the same corpus.
pub fn generate(spec: &GenSpec) -> Result<Corpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let tail_continue = libm::exp(-spec.age_decay);
    let tail = Geometric::new(1.0 - tail_continue)
        .map_err(|e| Error::InvalidSpec(format!("age_decay: {e}")))?;

    let mut records = Vec::with_capacity(spec.n_records);
    for i in 0..spec.n_records {
        let year = rng.random_range(spec.citing_years.start()..=spec.citing_years.end());
        let n_refs = rng.random_range(spec.refs_per_record.0..=spec.refs_per_record.1);
        let mut raw_refs = Vec::with_capacity(n_refs);
        for _ in 0..n_refs {
            let mut pick: f64 = rng.random();
            let classic = spec.classics.iter().find(|c| {
                if pick < c.weight {
                    true
                } else {
                    pick -= c.weight;
                    false
                }
            });
            let raw = match classic {
                Some(c) if rng.random_bool(spec.degrade_rate) => degrade(&c.cr),
                Some(c) => c.cr.clone(),
                None => {
                    let rpy = loop {
                        let age = spec.age_peak as u64 + tail.sample(&mut rng);
                        let rpy = year as i64 - age.min(u32::MAX as u64) as i64;
                        if rpy >= EARLIEST_YEAR as i64 {
                            break rpy as Year;
                        }
                    };
                    background_ref(&mut rng, rpy)
                }
            };
            raw_refs.push(raw);
        }
        records.push(Record {
            id: format!("GEN:{:016X}:{i:06}", spec.seed),
            journal: spec.journal.clone(),
            pub_year: Some(year),
            title: format!("Synthetic paper {i}"),
            doc_type: "Article".into(),
            raw_refs,
        });
    }
    Ok(Corpus::new(
        records,
        alloc::vec![format!("generated:{}", spec.seed)],
    ))
}
