//! Built-in check suites for `binsquare verify`.

use clap::ValueEnum;
use rayon::prelude::*;

use binsquare::candidate::{e_sets, CandidateOptions};
use binsquare::enumerate::{pair_search, pair_table, BoundConvention};
use binsquare::structure::{
    builtin_families, in_e3, is_s3n_2, is_s3n_3, is_s3n_4_form, kaneko_stoll_bound, repeat_10_11, square_pattern_10rep,
    verify_family,
};
use binsquare::BitInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    ESets,
    Families,
    Patterns,
    Bounds,
    Tables,
}

pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.to_string(), passed, detail: detail.into() }
}

pub fn run(suite: Suite) -> Vec<CheckResult> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::ESets) {
        out.extend(e_set_checks());
    }
    if matches!(suite, Suite::All | Suite::Families) {
        out.extend(family_checks());
    }
    if matches!(suite, Suite::All | Suite::Patterns) {
        out.extend(pattern_checks());
    }
    if matches!(suite, Suite::All | Suite::Bounds) {
        out.extend(bound_checks());
    }
    if matches!(suite, Suite::All | Suite::Tables) {
        out.extend(table_checks());
    }
    out
}

const SMALL_BITS: u32 = 20;

fn odd_below(bits: u32) -> impl ParallelIterator<Item = u64> {
    (0..1u64 << (bits - 1)).into_par_iter().map(|i| 2 * i + 1)
}

fn e_set_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut e2: Vec<u64> = odd_below(SMALL_BITS).filter(|n| (n * n).count_ones() == 2).collect();
    e2.sort_unstable();
    out.push(check("e2", e2 == [3], format!("odd n < 2^{SMALL_BITS} with s(n^2) = 2: {e2:?}")));

    let bad = odd_below(SMALL_BITS).filter(|&n| ((n * n).count_ones() == 3) != in_e3(&BitInt::from(n))).count();
    out.push(check("e3", bad == 0, format!("{{2^t + 1}} u {{7, 23}} against odd n < 2^{SMALL_BITS}: {bad} mismatches")));

    let opts = CandidateOptions::default();
    match e_sets(4, 12, &opts) {
        Ok(e) => {
            let got = numbers(&e.union(1, 12));
            out.push(check("e4-union", got == [13, 15, 47, 111], format!("union over s(n) <= 12: {got:?}")));
            let empty = (7..=9).all(|l| e.by_weight[&l].is_empty());
            out.push(check("e4-empty-7-9", empty, "E_{4,l} empty for l in 7..=9"));
        }
        Err(e) => out.push(check("e4", false, e.to_string())),
    }
    match e_sets(5, 9, &opts) {
        Ok(e) => {
            let got = numbers(&e.union(4, 9));
            let want = [29, 31, 51, 79, 91, 95, 157, 223, 279, 479, 727, 1471, 5793];
            out.push(check("e5-union", got == want, format!("union over 4 <= s(n) <= 9: {got:?}")));
            out.push(check("e5-weight-3", e.by_weight[&3].is_empty(), "no weight-3 solution outside the three families"));
        }
        Err(e) => out.push(check("e5", false, e.to_string())),
    }
    out
}

fn numbers(records: &[binsquare::SolutionRecord]) -> Vec<u64> {
    records.iter().filter_map(|r| r.n.to_u64()).collect()
}

const FAMILY_T_MAX: u32 = 200;

fn family_checks() -> Vec<CheckResult> {
    builtin_families()
        .iter()
        .map(|f| match verify_family(f, f.t_min..=FAMILY_T_MAX) {
            Ok(r) => {
                let failing: Vec<u32> = r.rows.iter().filter(|row| !row.pass).map(|row| row.t).collect();
                check(&format!("family {}", f.name), r.passed, format!("t in {}..={FAMILY_T_MAX}, failing t: {failing:?}", f.t_min))
            }
            Err(e) => check(&format!("family {}", f.name), false, e.to_string()),
        })
        .collect()
}

fn pattern_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mismatches = |c: u32, pred: fn(&BitInt) -> bool| {
        odd_below(SMALL_BITS).filter(|&n| ((3 * n).count_ones() == c) != pred(&BitInt::from(n))).count()
    };
    let bad2 = mismatches(2, is_s3n_2);
    out.push(check("s3n-2", bad2 == 0, format!("(10)^l 11 or 1 against s(3n) = 2, odd n < 2^{SMALL_BITS}: {bad2} mismatches")));
    let bad3 = mismatches(3, is_s3n_3);
    out.push(check("s3n-3", bad3 == 0, format!("1 (01)^a (10)^b 11 against s(3n) = 3: {bad3} mismatches")));
    let bad4 = odd_below(SMALL_BITS)
        .filter(|&n| {
            let v = BitInt::from(n);
            let form = is_s3n_4_form(&v);
            let c4 = (3 * n).count_ones() == 4;
            (form && !c4) || (c4 && !form && n > 1 << (2 * n.count_ones() - 1))
        })
        .count();
    out.push(check("s3n-4", bad4 == 0, format!("two-block form or n <= 2^(2s(n)-1) for s(3n) = 4: {bad4} violations")));
    let bad_sq = (1..=200usize)
        .into_par_iter()
        .filter(|&l| square_pattern_10rep(l).map(|w| w.to_int()).ok() != Some(repeat_10_11(l).square()))
        .count();
    out.push(check("square-10-11", bad_sq == 0, format!("closed form of ((10)^l 11)^2 for l <= 200: {bad_sq} mismatches")));
    out
}

const PRODUCT_BITS: u32 = 12;

fn bound_checks() -> Vec<CheckResult> {
    let violations: Vec<(u64, u64)> = odd_below(PRODUCT_BITS)
        .flat_map_iter(|a| {
            (1..1u64 << PRODUCT_BITS).step_by(2).filter_map(move |b| {
                let (l, m) = (a.count_ones(), b.count_ones());
                let p = (a * b).count_ones();
                let bound = kaneko_stoll_bound(l, m, p).ok()?;
                (u64::BITS - (a * b).leading_zeros() > bound).then_some((a, b))
            })
        })
        .collect();
    vec![check(
        "product-bounds",
        violations.is_empty(),
        format!("ab < 2^B for s(ab) in {{2, 3}}, odd a, b < 2^{PRODUCT_BITS}: {} violations", violations.len()),
    )]
}

fn table_checks() -> Vec<CheckResult> {
    let k = 9;
    let p = 2;
    match pair_table(k, p, BoundConvention::published(k, p)) {
        Ok(rows) => rows
            .iter()
            .map(|q| {
                let name = format!("pair k={k} s(x1)={} s(x0)={}", q.high.weight, q.low.weight);
                match pair_search(q) {
                    Ok(o) => check(
                        &name,
                        o.solutions.is_empty(),
                        format!("{} x {} pairs below 2^{}: {} solutions", o.high_size, o.low_size, q.high.max_bits, o.solutions.len()),
                    ),
                    Err(e) => check(&name, false, e.to_string()),
                }
            })
            .collect(),
        Err(e) => vec![check("pair table", false, e.to_string())],
    }
}
