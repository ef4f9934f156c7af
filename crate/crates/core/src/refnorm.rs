//! Cited-reference strings: parsing, year extraction and variant merging.
//!
//! Export files carry each cited reference as a compact comma-separated
//! string such as `LOTKA AJ, 1926, J WASHINGTON ACAD SC, V16, P317`. The
//! parser pulls out the first author, the referenced publication year, the
//! source, volume, page and DOI. Those fields form a [`RefKey`], and equal
//! keys are counted as one work.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Year, YearRange};

/// Characters of the squeezed source name compared when matching sources.
pub const SOURCE_PREFIX_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    /// Four-digit tokens outside this range are not taken as years.
    pub valid_years: YearRange,
}

impl ParseOptions {
    pub fn new(valid_years: YearRange) -> Self {
        ParseOptions { valid_years }
    }

    /// Validity range `[1500, current_year + 1]`.
    pub fn for_current_year(current_year: Year) -> Self {
        ParseOptions {
            valid_years: YearRange::validity(current_year),
        }
    }
}

/// One parsed cited reference. Only `raw` is guaranteed to be set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CitedReference {
    pub raw: String,
    pub author: Option<String>,
    pub rpy: Option<Year>,
    pub source: Option<String>,
    pub volume: Option<u32>,
    pub page: Option<String>,
    pub doi: Option<String>,
}

/// Identity of a cited work, built from normalized reference fields.
///
/// Ordering is field by field in declaration order, with absent fields first.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RefKey {
    pub author: Option<String>,
    pub rpy: Option<Year>,
    pub source: Option<String>,
    pub volume: Option<u32>,
    pub page: Option<String>,
}

impl RefKey {
    /// Both volume and page are known.
    pub fn is_complete(&self) -> bool {
        self.volume.is_some() && self.page.is_some()
    }
}

impl CitedReference {
    pub fn key(&self) -> RefKey {
        RefKey {
            author: self.author.clone(),
            rpy: self.rpy,
            source: self.source.clone(),
            volume: self.volume,
            page: self.page.clone(),
        }
    }

    /// No referenced publication year could be found.
    pub fn is_undated(&self) -> bool {
        self.rpy.is_none()
    }
}

/// Uppercases, drops punctuation and collapses whitespace.
pub fn normalize_token(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(ch.to_uppercase());
        } else if ch.is_whitespace() {
            pending_space = true;
        }
    }
    out
}

/// The first [`SOURCE_PREFIX_LEN`] alphanumerics of a source name, uppercased.
pub fn source_prefix(source: &str) -> String {
    source
        .chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_uppercase)
        .take(SOURCE_PREFIX_LEN)
        .collect()
}

/// Two source names agree on their normalized prefix.
pub fn sources_match(a: &str, b: &str) -> bool {
    let pa = source_prefix(a);
    !pa.is_empty() && pa == source_prefix(b)
}

fn is_year_token(token: &str, valid: &YearRange) -> Option<Year> {
    if token.len() != 4 || !token.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let year: Year = token.parse().ok()?;
    valid.contains(year).then_some(year)
}

fn volume_token(token: &str) -> Option<u32> {
    let digits = token.strip_prefix('V')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn page_token(token: &str) -> Option<&str> {
    let rest = token.strip_prefix('P')?;
    let alnum = !rest.is_empty() && rest.chars().all(|c| c.is_ascii_alphanumeric());
    // "PNAS" is a source, "P317" and "PA12" are pages.
    (alnum && rest.bytes().any(|b| b.is_ascii_digit())).then_some(rest)
}

fn doi_token(token: &str) -> Option<&str> {
    let head = token.get(..4)?;
    if head.eq_ignore_ascii_case("DOI ") {
        let rest = token[4..].trim();
        (!rest.is_empty()).then_some(rest)
    } else {
        None
    }
}

fn is_marker_token(token: &str) -> bool {
    volume_token(token).is_some() || page_token(token).is_some() || doi_token(token).is_some()
}

fn is_anonymous(author: &str) -> bool {
    matches!(author, "ANONYMOUS" | "ANON")
}

/// Splits a cited-reference string into its fields. Never fails: an
/// unrecognizable string yields a reference with only `raw` set.
pub fn parse_ref(raw: &str, options: &ParseOptions) -> CitedReference {
    let tokens: Vec<&str> = raw
        .split(", ")
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    let year_at = tokens
        .iter()
        .position(|t| is_year_token(t, &options.valid_years).is_some());
    let rpy = year_at.and_then(|i| is_year_token(tokens[i], &options.valid_years));

    let author = tokens
        .first()
        .filter(|_| year_at != Some(0))
        .map(|t| normalize_token(t))
        .filter(|a| !a.is_empty() && !is_anonymous(a));

    let source = year_at.and_then(|i| {
        tokens[i + 1..]
            .iter()
            .find(|t| !is_marker_token(t))
            .map(|t| normalize_token(t))
            .filter(|s| !s.is_empty())
    });

    let volume = tokens.iter().find_map(|t| volume_token(t));
    let page = tokens.iter().find_map(|t| page_token(t)).map(String::from);
    let doi = tokens.iter().find_map(|t| doi_token(t)).map(String::from);

    CitedReference {
        raw: String::from(raw),
        author,
        rpy,
        source,
        volume,
        page,
        doi,
    }
}

/// The referenced publication year, if there is one inside `window`.
pub fn extract_rpy(reference: &CitedReference, window: &YearRange) -> Option<Year> {
    reference.rpy.filter(|y| window.contains(*y))
}

/// How variant reference strings are grouped into works.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum MatchPolicy {
    /// Equal keys only.
    #[default]
    Exact,
    /// Equal keys, then incomplete variants absorbed into their unique
    /// complete counterpart.
    Fuzzy,
}

impl MatchPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatchPolicy::Exact => "exact",
            MatchPolicy::Fuzzy => "fuzzy",
        }
    }
}

impl core::str::FromStr for MatchPolicy {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(MatchPolicy::Exact),
            "fuzzy" => Ok(MatchPolicy::Fuzzy),
            other => Err(crate::Error::InvalidArgument(alloc::format!(
                "unknown match policy {other:?}"
            ))),
        }
    }
}

/// One work after grouping, with the number of references that denote it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantGroup {
    pub key: RefKey,
    /// Most frequent raw string of the group's own key.
    pub canonical: String,
    pub count: u64,
    /// References folded in from incomplete variants (fuzzy policy only).
    pub absorbed: u64,
}

#[derive(Default)]
struct Tally<'a> {
    count: u64,
    raws: BTreeMap<&'a str, u64>,
}

impl Tally<'_> {
    fn canonical(&self) -> String {
        let mut best: Option<(&str, u64)> = None;
        for (raw, n) in &self.raws {
            // BTreeMap order makes the first maximum the lexicographically smallest.
            if best.is_none_or(|(_, m)| *n > m) {
                best = Some((raw, *n));
            }
        }
        best.map(|(r, _)| String::from(r)).unwrap_or_default()
    }
}

fn absorbs(host: &RefKey, variant: &RefKey) -> bool {
    host.is_complete()
        && host.author == variant.author
        && host.rpy == variant.rpy
        && match (&variant.source, &host.source) {
            (None, _) => true,
            (Some(v), Some(h)) => sources_match(v, h),
            (Some(_), None) => false,
        }
}

/// Groups references into works, sorted by count descending and then by key.
///
/// Under [`MatchPolicy::Fuzzy`] a group missing volume or page joins the
/// complete group with the same author and year and a matching source
/// prefix, but only when exactly one such group exists. A variant without
/// a source matches any source. Group counts always sum to the number of
/// input references.
pub fn merge_variants<'a, I>(refs: I, policy: MatchPolicy) -> Vec<VariantGroup>
where
    I: IntoIterator<Item = &'a CitedReference>,
{
    let mut tallies: BTreeMap<RefKey, Tally<'a>> = BTreeMap::new();
    for r in refs {
        let tally = tallies.entry(r.key()).or_default();
        tally.count += 1;
        *tally.raws.entry(r.raw.as_str()).or_default() += 1;
    }

    let mut absorbed: BTreeMap<RefKey, u64> = BTreeMap::new();
    let mut hosted: Vec<&RefKey> = Vec::new();
    if policy == MatchPolicy::Fuzzy {
        for (key, tally) in &tallies {
            if key.is_complete() || key.author.is_none() || key.rpy.is_none() {
                continue;
            }
            let mut hosts = tallies.keys().filter(|h| absorbs(h, key));
            if let (Some(host), None) = (hosts.next(), hosts.next()) {
                *absorbed.entry(host.clone()).or_default() += tally.count;
                hosted.push(key);
            }
        }
    }

    let mut groups: Vec<VariantGroup> = tallies
        .iter()
        .filter(|(key, _)| !hosted.contains(key))
        .map(|(key, tally)| {
            let extra = absorbed.get(key).copied().unwrap_or(0);
            VariantGroup {
                key: key.clone(),
                canonical: tally.canonical(),
                count: tally.count + extra,
                absorbed: extra,
            }
        })
        .collect();
    groups.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.key.cmp(&b.key)));
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn opts() -> ParseOptions {
        ParseOptions::for_current_year(2025)
    }

    fn p(raw: &str) -> CitedReference {
        parse_ref(raw, &opts())
    }

    #[test]
    fn parses_journal_reference() {
        let r = p("LOTKA AJ, 1926, J WASHINGTON ACAD SC, V16, P317");
        assert_eq!(r.author.as_deref(), Some("LOTKA AJ"));
        assert_eq!(r.rpy, Some(1926));
        assert_eq!(r.source.as_deref(), Some("J WASHINGTON ACAD SC"));
        assert_eq!(r.volume, Some(16));
        assert_eq!(r.page.as_deref(), Some("317"));
        assert_eq!(r.doi, None);
    }

    #[test]
    fn parses_book_reference() {
        let r = p("PRICE DJD, 1963, LITTLE SCI BIG SCI");
        assert_eq!(r.author.as_deref(), Some("PRICE DJD"));
        assert_eq!(r.rpy, Some(1963));
        assert_eq!(r.source.as_deref(), Some("LITTLE SCI BIG SCI"));
        assert_eq!((r.volume, r.page), (None, None));
    }

    #[test]
    fn anonymous_yields_raw_only() {
        let r = p("ANONYMOUS");
        assert_eq!(r.raw, "ANONYMOUS");
        assert_eq!(r.key(), RefKey::default());
        assert!(r.is_undated());
        assert_eq!(p("[Anonymous], 1957, NATURE, V180, P1").author, None);
    }

    #[test]
    fn doi_and_punctuation() {
        let r = p("Kessler M.M., 1963, AM DOC, V14, P10, DOI 10.1002/asi.5090140103");
        assert_eq!(r.author.as_deref(), Some("KESSLER MM"));
        assert_eq!(r.doi.as_deref(), Some("10.1002/asi.5090140103"));
        assert_eq!(r.source.as_deref(), Some("AM DOC"));
    }

    #[test]
    fn page_is_never_the_year() {
        let r = p("SMITH J, J DOC, V5, P1926");
        assert_eq!(r.rpy, None);
        assert_eq!(r.page.as_deref(), Some("1926"));
        assert_eq!(r.source, None);
    }

    #[test]
    fn out_of_range_year_is_ignored() {
        let r = p("SMITH J, 1234, SOME BOOK");
        assert_eq!(r.rpy, None);
        let r = p("SMITH J, 1234, 1950, SOME BOOK");
        assert_eq!(r.rpy, Some(1950));
        assert_eq!(r.source.as_deref(), Some("SOME BOOK"));
    }

    #[test]
    fn source_tokens_starting_with_p_or_v() {
        let r = p("BALTIMORE D, 1970, PNAS, V67, PA12");
        assert_eq!(r.source.as_deref(), Some("PNAS"));
        assert_eq!(r.page.as_deref(), Some("A12"));
        let r = p("X Y, 1960, VISTAS ASTRON, V3, P5");
        assert_eq!(r.source.as_deref(), Some("VISTAS ASTRON"));
    }

    #[test]
    fn extract_rpy_window() {
        let window = YearRange::historical();
        assert_eq!(
            extract_rpy(&p("PRICE DJD, 1963, LITTLE SCI BIG SCI"), &window),
            Some(1963)
        );
        assert_eq!(extract_rpy(&p("OLD A, 1899, OLD BOOK"), &window), None);
        assert_eq!(extract_rpy(&p("ANONYMOUS"), &window), None);
        assert_eq!(extract_rpy(&p("EDGE A, 1900, B"), &window), Some(1900));
        assert_eq!(extract_rpy(&p("EDGE A, 1970, B"), &window), Some(1970));
    }

    #[test]
    fn identical_refs_form_one_group() {
        let refs: Vec<_> = (0..9)
            .map(|_| p("PRICE DJD, 1963, LITTLE SCI BIG SCI"))
            .collect();
        for policy in [MatchPolicy::Exact, MatchPolicy::Fuzzy] {
            let groups = merge_variants(&refs, policy);
            assert_eq!(groups.len(), 1);
            assert_eq!(groups[0].count, 9);
            assert_eq!(groups[0].canonical, "PRICE DJD, 1963, LITTLE SCI BIG SCI");
        }
    }

    #[test]
    fn lotka_variants_fold_into_complete_form() {
        let mut refs = Vec::new();
        refs.extend((0..184).map(|_| p("LOTKA AJ, 1926, J WASHINGTON ACAD SC, V16, P317")));
        refs.extend((0..7).map(|_| p("LOTKA AJ, 1926")));
        refs.extend((0..17).map(|i| p(&format!("OTHER{i} X, 1926, SOME J, V{i}, P1"))));
        assert_eq!(refs.len(), 208);

        let exact = merge_variants(&refs, MatchPolicy::Exact);
        assert_eq!(exact[0].count, 184);
        assert_eq!(exact.iter().map(|g| g.count).sum::<u64>(), 208);

        let fuzzy = merge_variants(&refs, MatchPolicy::Fuzzy);
        assert_eq!(fuzzy[0].count, 191);
        assert_eq!(fuzzy[0].absorbed, 7);
        assert_eq!(
            fuzzy[0].canonical,
            "LOTKA AJ, 1926, J WASHINGTON ACAD SC, V16, P317"
        );
        assert_eq!(fuzzy.iter().map(|g| g.count).sum::<u64>(), 208);
    }

    #[test]
    fn ambiguous_variant_stays_separate() {
        let refs = vec![
            p("GARFIELD E, 1963, AM DOC, V14, P195"),
            p("GARFIELD E, 1963, AM DOC, V14, P195"),
            p("GARFIELD E, 1963, AM DOC, V15, P289"),
            p("GARFIELD E, 1963"),
        ];
        let fuzzy = merge_variants(&refs, MatchPolicy::Fuzzy);
        assert_eq!(fuzzy.len(), 3);
        assert!(fuzzy.iter().all(|g| g.absorbed == 0));
        assert_eq!(fuzzy, merge_variants(&refs, MatchPolicy::Exact));
    }

    #[test]
    fn source_prefix_gates_absorption() {
        let refs = vec![
            p("BRADFORD SC, 1934, ENGINEERING-LONDON, V137, P85"),
            p("BRADFORD SC, 1934, ENGINEERING"),
            p("BRADFORD SC, 1934, NATURE"),
        ];
        let fuzzy = merge_variants(&refs, MatchPolicy::Fuzzy);
        assert_eq!(fuzzy[0].count, 2);
        assert_eq!(fuzzy.len(), 2);
    }

    #[test]
    fn incomplete_never_hosts() {
        let refs = vec![
            p("PRICE DJD, 1963, LITTLE SCI BIG SCI"),
            p("PRICE DJD, 1963"),
        ];
        let fuzzy = merge_variants(&refs, MatchPolicy::Fuzzy);
        assert_eq!(fuzzy.len(), 2);
    }

    #[test]
    fn ties_break_by_key() {
        let refs = vec![p("B X, 1950, S, V1, P1"), p("A X, 1950, S, V1, P1")];
        let groups = merge_variants(&refs, MatchPolicy::Exact);
        assert_eq!(groups[0].key.author.as_deref(), Some("A X"));
    }

    #[test]
    fn policy_from_str() {
        assert_eq!("fuzzy".parse::<MatchPolicy>().unwrap(), MatchPolicy::Fuzzy);
        assert!("loose".parse::<MatchPolicy>().is_err());
        assert_eq!(MatchPolicy::Exact.as_str().to_string(), "exact");
    }

    fn arb_raw() -> impl Strategy<Value = String> {
        let author =
            prop::sample::select(vec!["LOTKA AJ", "PRICE DJD", "KESSLER MM", "[ANONYMOUS]"]);
        let year = prop::option::of(1920i32..1930);
        let source = prop::option::of(prop::sample::select(vec![
            "J WASH ACAD SCI",
            "SCIENCE",
            "AM DOC",
        ]));
        let vol = prop::option::of(1u32..4);
        let page = prop::option::of(1u32..4);
        (author, year, source, vol, page).prop_map(|(a, y, s, v, pg)| {
            let mut parts = vec![a.to_string()];
            if let Some(y) = y {
                parts.push(y.to_string());
            }
            if let Some(s) = s {
                parts.push(s.to_string());
            }
            if let Some(v) = v {
                parts.push(format!("V{v}"));
            }
            if let Some(pg) = pg {
                parts.push(format!("P{pg}"));
            }
            parts.join(", ")
        })
    }

    proptest! {
        #[test]
        fn parse_is_idempotent_on_raw(raw in "\\PC{1,60}") {
            let first = p(&raw);
            prop_assert_eq!(&first.raw, &raw);
            prop_assert_eq!(p(&first.raw), first);
        }

        #[test]
        fn exact_policy_is_multiset_grouping(raws in prop::collection::vec(arb_raw(), 0..80)) {
            let refs: Vec<_> = raws.iter().map(|r| p(r)).collect();
            let groups = merge_variants(&refs, MatchPolicy::Exact);
            // Brute force: count each distinct key by scanning everything.
            let mut distinct: Vec<RefKey> = Vec::new();
            for r in &refs {
                if !distinct.contains(&r.key()) {
                    distinct.push(r.key());
                }
            }
            prop_assert_eq!(groups.len(), distinct.len());
            for key in &distinct {
                let n = refs.iter().filter(|r| &r.key() == key).count() as u64;
                let g = groups.iter().find(|g| &g.key == key).unwrap();
                prop_assert_eq!(g.count, n);
            }
        }

        #[test]
        fn merging_conserves_counts(raws in prop::collection::vec(arb_raw(), 0..80)) {
            let refs: Vec<_> = raws.iter().map(|r| p(r)).collect();
            for policy in [MatchPolicy::Exact, MatchPolicy::Fuzzy] {
                let total: u64 = merge_variants(&refs, policy).iter().map(|g| g.count).sum();
                prop_assert_eq!(total, refs.len() as u64);
            }
        }

        #[test]
        fn merging_ignores_input_order(raws in prop::collection::vec(arb_raw(), 0..60)) {
            let refs: Vec<_> = raws.iter().map(|r| p(r)).collect();
            let mut reversed = refs.clone();
            reversed.reverse();
            prop_assert_eq!(merge_variants(&refs, MatchPolicy::Fuzzy), merge_variants(&reversed, MatchPolicy::Fuzzy));
        }
    }
}
