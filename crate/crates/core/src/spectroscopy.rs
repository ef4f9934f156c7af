//! Per-year reference counts, local-median deviations and peaks.
//!
//! For every year `t` of a window the spectrum holds the number of cited
//! references `c(t)` published in `t`, the median `m(t)` of the counts from
//! `t - h` to `t + h` (h = 2 by default) and the deviation `c(t) - m(t)`.
//! Near the window edges the median window is cut to the available years;
//! even-sized windows take the midpoint of the two middle values.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::refnorm::{extract_rpy, merge_variants, CitedReference, MatchPolicy, RefKey};
use crate::{Error, Halves, Result, Year, YearRange};

/// Median half-width used unless a caller asks otherwise (five-year windows).
pub const DEFAULT_HALF_WIDTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumRow {
    pub year: Year,
    pub count: u64,
    pub median: Halves,
    pub deviation: Halves,
}

/// Rows for every year of the window, ascending and without gaps.
/// A spectrum with no window has no rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    window: Option<YearRange>,
    half_width: usize,
    rows: Vec<SpectrumRow>,
}

impl Spectrum {
    pub fn empty(half_width: usize) -> Self {
        Spectrum {
            window: None,
            half_width,
            rows: Vec::new(),
        }
    }

    /// Builds the spectrum from one count per year of `window`.
    pub fn from_counts(window: YearRange, counts: &[u64], half_width: usize) -> Result<Self> {
        if counts.len() != window.len() {
            return Err(Error::InvalidArgument(alloc::format!(
                "{} counts for a {}-year window",
                counts.len(),
                window.len()
            )));
        }
        let rows = window
            .years()
            .zip(counts)
            .zip(median_deviation(counts, half_width))
            .map(|((year, &count), (median, deviation))| SpectrumRow {
                year,
                count,
                median,
                deviation,
            })
            .collect();
        Ok(Spectrum {
            window: Some(window),
            half_width,
            rows,
        })
    }

    /// Reassembles a spectrum from stored rows, checking that they are
    /// contiguous and that every deviation is count minus median.
    pub fn from_rows(rows: Vec<SpectrumRow>, half_width: usize) -> Result<Self> {
        let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
            return Ok(Spectrum::empty(half_width));
        };
        let window = YearRange::new(first.year, last.year)?;
        if rows.len() != window.len() || rows.iter().zip(window.years()).any(|(r, y)| r.year != y) {
            return Err(Error::InvalidArgument(
                "spectrum rows are not contiguous".into(),
            ));
        }
        if rows
            .iter()
            .any(|r| Halves::from_int(r.count as i64) - r.median != r.deviation)
        {
            return Err(Error::InvalidArgument(
                "deviation differs from count minus median".into(),
            ));
        }
        Ok(Spectrum {
            window: Some(window),
            half_width,
            rows,
        })
    }

    pub fn window(&self) -> Option<YearRange> {
        self.window
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn rows(&self) -> &[SpectrumRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, year: Year) -> Option<&SpectrumRow> {
        let start = self.window?.start();
        let offset = usize::try_from(year.checked_sub(start)?).ok()?;
        self.rows.get(offset)
    }

    pub fn count(&self, year: Year) -> u64 {
        self.row(year).map_or(0, |r| r.count)
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }
}

/// Counts in-window dated references per year and derives medians and deviations.
pub fn build_spectrum<'a, I>(refs: I, window: YearRange, half_width: usize) -> Spectrum
where
    I: IntoIterator<Item = &'a CitedReference>,
{
    build_spectrum_from_years(
        refs.into_iter().filter_map(|r| extract_rpy(r, &window)),
        window,
        half_width,
    )
}

/// Like [`build_spectrum`] for bare years. Years outside `window` are ignored.
pub fn build_spectrum_from_years<I>(years: I, window: YearRange, half_width: usize) -> Spectrum
where
    I: IntoIterator<Item = Year>,
{
    let mut counts = alloc::vec![0u64; window.len()];
    for year in years {
        if window.contains(year) {
            counts[(year - window.start()) as usize] += 1;
        }
    }
    Spectrum::from_counts(window, &counts, half_width).expect("counts sized to window")
}

fn median_of(window: &mut [u64]) -> Halves {
    window.sort_unstable();
    let n = window.len();
    if n % 2 == 1 {
        Halves::from_int(window[n / 2] as i64)
    } else {
        Halves::midpoint(window[n / 2 - 1] as i64, window[n / 2] as i64)
    }
}

/// For each position, the median of the counts within `half_width`
/// positions (cut at the series ends) and the count's deviation from it.
pub fn median_deviation(counts: &[u64], half_width: usize) -> Vec<(Halves, Halves)> {
    let mut scratch = Vec::with_capacity(2 * half_width + 1);
    (0..counts.len())
        .map(|i| {
            let lo = i.saturating_sub(half_width);
            let hi = (i + half_width + 1).min(counts.len());
            scratch.clear();
            scratch.extend_from_slice(&counts[lo..hi]);
            let median = median_of(&mut scratch);
            (median, Halves::from_int(counts[i] as i64) - median)
        })
        .collect()
}

/// Percentage `part / whole`, kept exact and displayed to one decimal,
/// rounding half up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Share {
    part: u64,
    whole: u64,
}

impl Share {
    pub fn part(&self) -> u64 {
        self.part
    }

    pub fn whole(&self) -> u64 {
        self.whole
    }

    /// Percentage in tenths of a percent, rounded half up.
    pub fn tenths(&self) -> u64 {
        let numerator = 2000 * self.part as u128 + self.whole as u128;
        (numerator / (2 * self.whole as u128)) as u64
    }

    /// Whole percent, rounded half up from the exact ratio.
    pub fn whole_percent(&self) -> u64 {
        ((200 * self.part as u128 + self.whole as u128) / (2 * self.whole as u128)) as u64
    }

    /// The one-decimal display value as a float.
    pub fn percent(&self) -> f64 {
        self.tenths() as f64 / 10.0
    }

    pub fn fraction(&self) -> f64 {
        self.part as f64 / self.whole as f64
    }
}

impl fmt::Display for Share {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.tenths();
        write!(f, "{}.{}", t / 10, t % 10)
    }
}

pub fn share(part: u64, whole: u64) -> Result<Share> {
    if whole == 0 {
        return Err(Error::ZeroWhole);
    }
    if part > whole {
        return Err(Error::PartExceedsWhole { part, whole });
    }
    Ok(Share { part, whole })
}

/// A work inside a peak year with its share of that year's references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedWork {
    pub key: RefKey,
    pub canonical: alloc::string::String,
    pub count: u64,
    pub share: Share,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Peak {
    pub year: Year,
    pub deviation: Halves,
    pub count: u64,
    /// 1-based.
    pub rank: usize,
    pub top_works: Vec<RankedWork>,
}

fn peak_order(a: &SpectrumRow, b: &SpectrumRow) -> Ordering {
    b.deviation
        .cmp(&a.deviation)
        .then_with(|| b.count.cmp(&a.count))
        .then_with(|| a.year.cmp(&b.year))
}

/// Finds up to `k` peak years.
///
/// A year is a candidate when its deviation is positive, at least `min_dev`,
/// strictly above the previous year's and no lower than the next year's.
/// Edge years compare only against the neighbour they have. Candidates are
/// ranked by deviation, then count, then the older year first.
pub fn detect_peaks(spectrum: &Spectrum, k: usize, min_dev: f64) -> Result<Vec<Peak>> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "peak count must be at least 1".into(),
        ));
    }
    if !min_dev.is_finite() || min_dev < 0.0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "minimum deviation {min_dev} must be >= 0"
        )));
    }
    let rows = spectrum.rows();
    let mut candidates: Vec<&SpectrumRow> = rows
        .iter()
        .enumerate()
        .filter(|(i, row)| {
            let d = row.deviation;
            let left_ok = *i == 0 || d > rows[i - 1].deviation;
            let right_ok = rows.get(i + 1).is_none_or(|next| d >= next.deviation);
            left_ok && right_ok && d > Halves::ZERO && d.cmp_f64(min_dev) != Ordering::Less
        })
        .map(|(_, row)| row)
        .collect();
    candidates.sort_by(|a, b| peak_order(a, b));
    Ok(candidates
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, row)| Peak {
            year: row.year,
            deviation: row.deviation,
            count: row.count,
            rank: i + 1,
            top_works: Vec::new(),
        })
        .collect())
}

/// Groups the references of one year into works and returns the `top_n`
/// largest with their share of all references from that year.
pub fn annotate_peak<'a, I>(
    year: Year,
    refs: I,
    policy: MatchPolicy,
    top_n: usize,
) -> Result<Vec<RankedWork>>
where
    I: IntoIterator<Item = &'a CitedReference>,
{
    if top_n == 0 {
        return Err(Error::InvalidArgument("top_n must be at least 1".into()));
    }
    let in_year: Vec<&CitedReference> = refs.into_iter().filter(|r| r.rpy == Some(year)).collect();
    let whole = in_year.len() as u64;
    merge_variants(in_year, policy)
        .into_iter()
        .take(top_n)
        .map(|g| {
            Ok(RankedWork {
                share: share(g.count, whole)?,
                key: g.key,
                canonical: g.canonical,
                count: g.count,
            })
        })
        .collect()
}

/// Fills `top_works` of every peak.
pub fn annotate_peaks(
    peaks: &mut [Peak],
    refs: &[CitedReference],
    policy: MatchPolicy,
    top_n: usize,
) -> Result<()> {
    for peak in peaks {
        peak.top_works = annotate_peak(peak.year, refs, policy, top_n)?;
    }
    Ok(())
}
