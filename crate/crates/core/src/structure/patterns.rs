//! Digit patterns of odd `n` with `3n` of small weight, the square of
//! `(10)^l 11`, and the set of odd `n` with `s(n²) = 3`.

use crate::bigbits::{BitInt, BitWord};
use crate::error::{Error, Result};

/// Strips as many leading copies of `unit` as possible.
fn strip_repeats<'a>(mut s: &'a str, unit: &str) -> &'a str {
    while let Some(rest) = s.strip_prefix(unit) {
        s = rest;
    }
    s
}

fn binary(n: &BitInt) -> String {
    n.to_binary_string()
}

/// `(n)₂ ∈ {(10)^l 11 : l ≥ 0} ∪ {1}`, exactly the odd `n` with `s(3n) = 2`.
pub fn is_s3n_2(n: &BitInt) -> bool {
    is_s3n_2_str(&binary(n))
}

fn is_s3n_2_str(s: &str) -> bool {
    s == "1" || strip_repeats(s, "10") == "11"
}

/// `(n)₂ ∈ {1 (01)^a (10)^b 11 : a, b ≥ 0}`, exactly the odd `n` with
/// `s(3n) = 3`. These are the integers `(1 + 4^i + 4^j)/3`, `1 ≤ i < j`.
pub fn is_s3n_3(n: &BitInt) -> bool {
    let s = binary(n);
    let Some(rest) = s.strip_prefix('1') else { return false };
    strip_repeats(strip_repeats(rest, "01"), "10") == "11"
}

/// The narrower description `{1 (10)^l 11} ∪ {1 (01)^l 11}`. It misses the
/// mixed words, for instance `91 = 1011011` with `3·91 = 100010001₂`.
pub fn is_s3n_3_listed(n: &BitInt) -> bool {
    let s = binary(n);
    let Some(rest) = s.strip_prefix('1') else { return false };
    strip_repeats(rest, "10") == "11" || strip_repeats(rest, "01") == "11"
}

/// The split `(n)₂ = x1 0^s x0` with `s ≥ 2` and both blocks of the
/// `s(3x) = 2` shape, if `n` has that form. Such `n` satisfy `s(3n) = 4`.
pub fn s3n_4_blocks(n: &BitInt) -> Option<(BitWord, usize, BitWord)> {
    if !n.is_odd() {
        return None;
    }
    let d = super::decompose(n, 2).ok()?;
    if d.m() != 1 {
        return None;
    }
    let (x0, x1) = (&d.blocks()[0], &d.blocks()[1]);
    (is_s3n_2_str(&x0.to_string()) && is_s3n_2_str(&x1.to_string())).then(|| (x1.clone(), d.gaps()[0], x0.clone()))
}

pub fn is_s3n_4_form(n: &BitInt) -> bool {
    s3n_4_blocks(n).is_some()
}

/// `(10)^l 11`.
pub fn repeat_10_11(l: usize) -> BitInt {
    let word: BitWord = format!("{}11", "10".repeat(l)).parse().expect("binary literal");
    word.to_int()
}

/// The expansion of `((10)^l 11)²` from its closed form, which depends on
/// `l mod 3`. Needs `l ≥ 1`.
pub fn square_pattern_10rep(l: usize) -> Result<BitWord> {
    if l == 0 {
        return Err(Error::InvalidQuery("square pattern needs l >= 1".into()));
    }
    let (j, r) = (l / 3, l % 3);
    let high = "111000";
    let low = "000111";
    let s = match r {
        0 => format!("{}111001{}001", high.repeat(j - 1), low.repeat(j)),
        1 => format!("{}1111{}001", high.repeat(j), low.repeat(j)),
        _ => format!("{}11100111{}001", high.repeat(j), low.repeat(j)),
    };
    s.parse()
}

/// Membership in `{2^t + 1 : t ≥ 2} ∪ {7, 23}`, the odd `n` with `s(n²) = 3`.
pub fn in_e3(n: &BitInt) -> bool {
    if n.to_u64().is_some_and(|v| v == 7 || v == 23) {
        return true;
    }
    n.weight() == 2 && n.is_odd() && n.bit_len() >= 3
}
