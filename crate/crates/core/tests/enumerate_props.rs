use binsquare::enumerate::{delta_set, delta_set_with, scan, scan_with, DeltaQuery, ScanQuery, SearchOptions};
use proptest::prelude::*;

fn brute_delta(l1: u32, l2: u32, m: u32, a: Option<u32>) -> Vec<u64> {
    (1u64..1 << m)
        .step_by(2)
        .filter(|n| n.count_ones() == l1 && (n * n).count_ones() <= l2)
        .filter(|n| a.is_none_or(|a| (n >> 1).trailing_zeros() + 1 == a))
        .collect()
}

fn values(records: &[binsquare::SolutionRecord]) -> Vec<u64> {
    records.iter().map(|r| r.n.to_u64().unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_matches_brute_force(l1 in 1u32..8, l2 in 1u32..12, m in 1u32..21, a in proptest::option::of(1u32..20), window in 1u32..=64) {
        // rejected parameters describe empty sets
        let Ok(mut q) = DeltaQuery::new(l1, l2, m) else {
            prop_assert!(l1 > m);
            return Ok(());
        };
        if let Some(a) = a {
            match q.partition(a) {
                Ok(p) => q = p,
                Err(_) => {
                    prop_assert!(brute_delta(l1, l2, m, Some(a)).is_empty());
                    return Ok(());
                }
            }
        }
        let opts = SearchOptions { window, ..Default::default() };
        let got = values(&delta_set_with(&q, &opts).unwrap().records);
        prop_assert_eq!(got, brute_delta(l1, l2, m, a));
    }
}

#[test]
fn partitions_cover_delta() {
    let q = DeltaQuery::new(6, 9, 26).unwrap();
    let whole = values(&delta_set(&q).unwrap());
    let mut parts: Vec<u64> = q.partitions().flat_map(|a| values(&delta_set(&q.partition(a).unwrap()).unwrap())).collect();
    parts.sort_unstable();
    assert_eq!(parts, whole);
}

#[test]
fn scan_is_thread_count_independent() {
    let q = ScanQuery::new(10, 30).unwrap();
    let runs: Vec<_> = [1, 2, 4]
        .iter()
        .map(|&t| rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(|| scan_with(&q, &SearchOptions::default()).unwrap()))
        .collect();
    assert!(runs.windows(2).all(|w| w[0].records == w[1].records && w[0].stats == w[1].stats));
    let narrow = scan_with(&q, &SearchOptions { window: 7, ..Default::default() }).unwrap();
    assert_eq!(narrow.records, runs[0].records);
    let unpruned = scan_with(&q, &SearchOptions { prune: false, ..Default::default() }).unwrap();
    assert_eq!(unpruned.records, runs[0].records);
    assert_eq!(unpruned.stats.pruned, 0);
    let s = &runs[0].stats;
    assert_eq!(u128::from(s.enumerated) + s.pruned, s.planned);
}

#[test]
fn scan_matches_brute_force_below_2_pow_26() {
    for k in 1..=13u32 {
        let got = values(&scan(&ScanQuery::new(k, 26).unwrap()).unwrap());
        let want: Vec<u64> = (1u64..1 << 26).step_by(2).filter(|n| n.count_ones() == k && (n * n).count_ones() == k).collect();
        assert_eq!(got, want, "k = {k}");
    }
}
