use crate::bigbits::BitInt;
use crate::error::{Error, Result};

/// Exponent `B` with `ab < 2^B` for odd `a, b` with `s(a) = l`, `s(b) = m`
/// and `s(ab) = target`: `2lm - 4` for target 2, `4lm - 13` for target 3
/// (which also needs `lm ≥ 5`). No such bound exists for larger targets.
pub fn kaneko_stoll_bound(l: u32, m: u32, target: u32) -> Result<u32> {
    if l < 2 || m < 2 {
        return Err(Error::InvalidQuery(format!("product bound needs s(a), s(b) >= 2, got {l}, {m}")));
    }
    match target {
        2 => Ok(2 * l * m - 4),
        3 if l * m >= 5 => Ok(4 * l * m - 13),
        3 => Err(Error::InvalidQuery(format!("product bound for s(ab) = 3 needs s(a)s(b) >= 5, got {}", l * m))),
        t => Err(Error::UnsupportedProductWeight(t)),
    }
}

/// Exponent `f^k(1)` with `f(i) = 4i + k²`: every odd `n ≥ 2^(f^k(1))` with
/// `s(n) = s(n²) = k` splits into blocks separated by long zero runs.
pub fn factorization_constant(k: u32) -> BitInt {
    let kk = BitInt::from(u64::from(k) * u64::from(k));
    let mut e = BitInt::one();
    for _ in 0..k {
        e = &e.shift_left(2) + &kk;
    }
    e
}

/// Largest useful shift `l` for the candidate search on `s(n²) = 4`.
pub fn ell_bound_s4(k: u32) -> u32 {
    2 * k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(kaneko_stoll_bound(5, 4, 2).unwrap(), 36);
        assert_eq!(kaneko_stoll_bound(5, 5, 2).unwrap(), 46);
        assert_eq!(kaneko_stoll_bound(7, 7, 3).unwrap(), 183);
        assert_eq!(kaneko_stoll_bound(6, 5, 3).unwrap(), 107);
        assert!(kaneko_stoll_bound(5, 4, 4).is_err());
        assert!(kaneko_stoll_bound(1, 4, 2).is_err());
        assert!(kaneko_stoll_bound(2, 2, 3).is_err());
        assert_eq!(kaneko_stoll_bound(2, 3, 3).unwrap(), 11);
    }

    #[test]
    fn factorization_exponent() {
        // f(i) = 4i + 1 for k = 1: f(1) = 5
        assert_eq!(factorization_constant(1), BitInt::from(5u64));
        // k = 2: f(1) = 8, f(8) = 36
        assert_eq!(factorization_constant(2), BitInt::from(36u64));
        // closed form 4^k + k²(4^k - 1)/3
        for k in 1..=20u64 {
            let p = 1u128 << (2 * k);
            let want = p + (k * k) as u128 * (p - 1) / 3;
            assert_eq!(factorization_constant(k as u32).to_u128(), Some(want));
        }
        assert!(factorization_constant(60).bit_len() > 120);
        assert_eq!(ell_bound_s4(17), 34);
    }
}
