use proptest::prelude::*;
use rpys_core::{
    build_spectrum, build_spectrum_from_years, classify_corpus, detect_peaks, median_deviation,
    merge_variants, parse_ref, subset_share_series, ClassifierConfig, Corpus, Halves, MatchPolicy,
    ParseOptions, Record, Spectrum, YearRange,
};

/// Sorts every window and reads off the middle, in doubled units.
fn oracle(counts: &[u64], half_width: usize) -> Vec<(i64, i64)> {
    (0..counts.len())
        .map(|i| {
            let lo = i.saturating_sub(half_width);
            let hi = (i + half_width).min(counts.len() - 1);
            let mut w: Vec<i64> = counts[lo..=hi].iter().map(|&c| c as i64).collect();
            w.sort();
            let n = w.len();
            let doubled = if n % 2 == 1 {
                2 * w[n / 2]
            } else {
                w[n / 2 - 1] + w[n / 2]
            };
            (doubled, 2 * counts[i] as i64 - doubled)
        })
        .collect()
}

fn doubled(md: &[(Halves, Halves)]) -> Vec<(i64, i64)> {
    md.iter().map(|(m, d)| (m.doubled(), d.doubled())).collect()
}

fn opts() -> ParseOptions {
    ParseOptions::for_current_year(2025)
}

proptest! {
    #[test]
    fn median_matches_sorting_oracle(counts in prop::collection::vec(0u64..=1000, 0..200), h in 1usize..4) {
        prop_assert_eq!(doubled(&median_deviation(&counts, h)), oracle(&counts, h));
    }

    #[test]
    fn translation_invariance(years in prop::collection::vec(1900i32..1971, 0..300), shift in -300i32..300) {
        let window = YearRange::historical();
        let a = build_spectrum_from_years(years.iter().copied(), window, 2);
        let b = build_spectrum_from_years(years.iter().map(|y| y + shift), window.shifted(shift), 2);
        for (ra, rb) in a.rows().iter().zip(b.rows()) {
            prop_assert_eq!(ra.year + shift, rb.year);
            prop_assert_eq!((ra.count, ra.median, ra.deviation), (rb.count, rb.median, rb.deviation));
        }
    }

    #[test]
    fn doubling_keeps_peak_ranking(years in prop::collection::vec(1940i32..1961, 1..300)) {
        let window = YearRange::new(1940, 1960).unwrap();
        let once = build_spectrum_from_years(years.iter().copied(), window, 2);
        let twice = build_spectrum_from_years(years.iter().chain(years.iter()).copied(), window, 2);
        for (a, b) in once.rows().iter().zip(twice.rows()) {
            prop_assert_eq!(2 * a.count, b.count);
            prop_assert_eq!(2 * a.deviation.doubled(), b.deviation.doubled());
        }
        let p1: Vec<_> = detect_peaks(&once, 50, 0.0).unwrap().iter().map(|p| p.year).collect();
        let p2: Vec<_> = detect_peaks(&twice, 50, 0.0).unwrap().iter().map(|p| p.year).collect();
        prop_assert_eq!(p1, p2);
    }

    #[test]
    fn spectrum_conserves_dated_refs(years in prop::collection::vec(1850i32..2000, 0..300)) {
        let raws: Vec<String> = years.iter().enumerate().map(|(i, y)| format!("A{i} X, {y}, J")).collect();
        let mut refs: Vec<_> = raws.iter().map(|r| parse_ref(r, &opts())).collect();
        refs.push(parse_ref("ANONYMOUS", &opts()));
        let window = YearRange::historical();
        let s = build_spectrum(&refs, window, 2);
        prop_assert_eq!(s.total() as usize, years.iter().filter(|y| window.contains(**y)).count());
        prop_assert_eq!(s.rows().len(), window.len());
    }

    #[test]
    fn peaks_ignore_reference_order(years in prop::collection::vec(1900i32..1971, 0..400), seed in any::<u64>()) {
        let raws: Vec<String> = years.iter().enumerate().map(|(i, y)| format!("A{} X, {y}, J", i % 7)).collect();
        let refs: Vec<_> = raws.iter().map(|r| parse_ref(r, &opts())).collect();
        let mut shuffled = refs.clone();
        // Deterministic Fisher-Yates driven by a xorshift state.
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let window = YearRange::historical();
        let a = build_spectrum(&refs, window, 2);
        let b = build_spectrum(&shuffled, window, 2);
        prop_assert_eq!(&a, &b);
        let mut pa = detect_peaks(&a, 10, 0.0).unwrap();
        let mut pb = detect_peaks(&b, 10, 0.0).unwrap();
        rpys_core::spectroscopy::annotate_peaks(&mut pa, &refs, MatchPolicy::Fuzzy, 3).unwrap();
        rpys_core::spectroscopy::annotate_peaks(&mut pb, &shuffled, MatchPolicy::Fuzzy, 3).unwrap();
        prop_assert_eq!(&pa, &pb);
        for p in &pa {
            prop_assert!(p.top_works.iter().map(|w| w.count).sum::<u64>() <= p.count);
            let all = rpys_core::annotate_peak(p.year, &refs, MatchPolicy::Exact, usize::MAX).unwrap();
            prop_assert_eq!(all.iter().map(|w| w.count).sum::<u64>(), p.count);
        }
    }

    #[test]
    fn peaks_follow_ordering_rule(counts in prop::collection::vec(0u64..50, 1..60)) {
        let window = YearRange::new(1900, 1900 + counts.len() as i32 - 1).unwrap();
        let s = Spectrum::from_counts(window, &counts, 2).unwrap();
        let peaks = detect_peaks(&s, 100, 0.0).unwrap();
        for (i, p) in peaks.iter().enumerate() {
            prop_assert_eq!(p.rank, i + 1);
            prop_assert!(p.deviation > Halves::ZERO);
        }
        for w in peaks.windows(2) {
            let key = |p: &rpys_core::Peak| (std::cmp::Reverse(p.deviation), std::cmp::Reverse(p.count), p.year);
            prop_assert!(key(&w[0]) < key(&w[1]));
        }
        // Every candidate by exhaustive scan shows up.
        let rows = s.rows();
        let expected = (0..rows.len()).filter(|&i| {
            let d = rows[i].deviation;
            d > Halves::ZERO
                && (i == 0 || d > rows[i - 1].deviation)
                && (i + 1 == rows.len() || d >= rows[i + 1].deviation)
        }).count();
        prop_assert_eq!(peaks.len(), expected);
    }

    #[test]
    fn classification_is_permutation_invariant_and_monotone(
        specs in prop::collection::vec((1970i32..2000, any::<bool>(), any::<bool>()), 0..40),
        flip in any::<prop::sample::Index>(),
    ) {
        let records: Vec<Record> = specs.iter().enumerate().map(|(i, (year, titled, marker))| Record {
            id: format!("R{i:03}"),
            journal: "J AM SOC INF SCI".into(),
            pub_year: Some(*year),
            title: if *titled { "A citation study".into() } else { "Library catalogs".into() },
            doc_type: "Article".into(),
            raw_refs: if *marker {
                vec!["GARFIELD E, 1979, SCIENTOMETRICS, V1, P359".into()]
            } else {
                vec!["DEWEY M, 1876, CLASSIFICATION".into()]
            },
        }).collect();
        let config = ClassifierConfig::default();
        let corpus = Corpus::new(records.clone(), vec![]);
        let p = classify_corpus(&corpus, &config, &opts()).unwrap();
        prop_assert_eq!(p.in_set.len() + p.out_set.len() + p.excluded.len(), records.len());

        let mut reversed = records.clone();
        reversed.reverse();
        let q = classify_corpus(&Corpus::new(reversed, vec![]), &config, &opts()).unwrap();
        let sorted = |v: &Vec<String>| { let mut v = v.clone(); v.sort(); v };
        prop_assert_eq!(sorted(&p.in_set), sorted(&q.in_set));
        prop_assert_eq!(sorted(&p.out_set), sorted(&q.out_set));

        let series = subset_share_series(&p, &corpus);
        prop_assert_eq!(series.iter().map(|r| r.n_total).sum::<u64>() as usize, p.in_set.len() + p.out_set.len());
        prop_assert_eq!(series.iter().map(|r| r.n_in).sum::<u64>() as usize, p.in_set.len());

        if !records.is_empty() {
            let i = flip.index(records.len());
            let mut more = records.clone();
            more[i].raw_refs.push("EGGHE L, 2006, SCIENTOMETRICS, V69, P131".into());
            let r = classify_corpus(&Corpus::new(more, vec![]), &config, &opts()).unwrap();
            for id in &p.in_set {
                prop_assert!(r.in_set.contains(id));
            }
            prop_assert!(r.in_set.len() >= p.in_set.len());
        }
    }
}

#[test]
fn thousand_random_series_match_oracle() {
    // xorshift so the series are fixed across runs.
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..1000 {
        let len = (next() % 201) as usize;
        let counts: Vec<u64> = (0..len).map(|_| next() % 1001).collect();
        assert_eq!(doubled(&median_deviation(&counts, 2)), oracle(&counts, 2));
    }
}

#[test]
fn fuzzy_merge_conserves_in_peak_year() {
    let mut raws = vec!["BRADFORD SC, 1934, ENGINEERING-LONDON, V137, P85"; 99];
    raws.extend(["BRADFORD SC, 1934, ENGINEERING"; 7]);
    let others: Vec<String> = (0..30)
        .map(|i| format!("OTHER{i} Y, 1934, MISC J, V{i}, P{i}"))
        .collect();
    let mut refs: Vec<_> = raws.iter().map(|r| parse_ref(r, &opts())).collect();
    refs.extend(others.iter().map(|r| parse_ref(r, &opts())));
    let groups = merge_variants(&refs, MatchPolicy::Fuzzy);
    assert_eq!(groups[0].count, 106);
    assert_eq!(groups.iter().map(|g| g.count).sum::<u64>(), 136);
}
