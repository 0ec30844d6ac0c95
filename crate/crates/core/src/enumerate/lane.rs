//! Fixed-width integer lanes used by the hot enumeration loops.
//!
//! A search below `2^m` runs on `u64` when `m ≤ 64`, on `u128` when
//! `m ≤ 128` and on [`BitInt`] beyond that. The lanes share one trait so the
//! shard driver is written once.

use crate::bigbits::{low_square_window_weight, BitInt};

pub(crate) trait Lane: Clone + Ord + Send + Sync + 'static {
    fn zero() -> Self;
    /// `2^count - 1`; `count` never exceeds the lane width.
    fn low_ones(count: usize) -> Self;
    fn with_bit(self, i: usize) -> Self;
    /// `self | (r << shift)`; the shifted value fits by construction.
    fn or_shifted(&self, r: &Self, shift: usize) -> Self;
    fn bit_len(&self) -> usize;
    /// Next larger value with the same weight, `None` when the lane overflows.
    fn next_same_weight(&self) -> Option<Self>;
    fn low_u64(&self) -> u64;
    fn square_weight(&self) -> u32;
    fn to_bitint(&self) -> BitInt;

    /// Prefilter: may the square of `self` have weight at most `cap`,
    /// judging only from the low `window` bits?
    #[inline]
    fn prefilter_keep(&self, cap: u32, window: u32) -> bool {
        low_square_window_weight(self.low_u64(), window).map_or(true, |w| w <= cap)
    }
}

impl Lane for u64 {
    fn zero() -> Self {
        0
    }
    fn low_ones(count: usize) -> Self {
        if count >= 64 { u64::MAX } else { (1u64 << count) - 1 }
    }
    fn with_bit(self, i: usize) -> Self {
        self | 1 << i
    }
    #[inline]
    fn or_shifted(&self, r: &Self, shift: usize) -> Self {
        if shift >= 64 { *self } else { self | r << shift }
    }
    fn bit_len(&self) -> usize {
        64 - self.leading_zeros() as usize
    }
    #[inline]
    fn next_same_weight(&self) -> Option<Self> {
        let x = *self;
        if x == 0 {
            return None;
        }
        let c = x & x.wrapping_neg();
        let r = x.checked_add(c)?;
        Some((((r ^ x) >> 2) >> c.trailing_zeros()) | r)
    }
    fn low_u64(&self) -> u64 {
        *self
    }
    #[inline]
    fn square_weight(&self) -> u32 {
        (*self as u128 * *self as u128).count_ones()
    }
    fn to_bitint(&self) -> BitInt {
        BitInt::from(*self)
    }
}

impl Lane for u128 {
    fn zero() -> Self {
        0
    }
    fn low_ones(count: usize) -> Self {
        if count >= 128 { u128::MAX } else { (1u128 << count) - 1 }
    }
    fn with_bit(self, i: usize) -> Self {
        self | 1 << i
    }
    #[inline]
    fn or_shifted(&self, r: &Self, shift: usize) -> Self {
        if shift >= 128 { *self } else { self | r << shift }
    }
    fn bit_len(&self) -> usize {
        128 - self.leading_zeros() as usize
    }
    #[inline]
    fn next_same_weight(&self) -> Option<Self> {
        let x = *self;
        if x == 0 {
            return None;
        }
        let c = x & x.wrapping_neg();
        let r = x.checked_add(c)?;
        Some((((r ^ x) >> 2) >> c.trailing_zeros()) | r)
    }
    fn low_u64(&self) -> u64 {
        *self as u64
    }
    #[inline]
    fn square_weight(&self) -> u32 {
        let lo = *self as u64 as u128;
        let hi = *self >> 64;
        let ll = lo * lo;
        let lh = lo * hi;
        let hh = hi * hi;
        // n² = ll + 2·lh·2^64 + hh·2^128, accumulated in 64-bit limbs
        let mut limbs = [0u64; 4];
        let mut acc = ll as u64 as u128;
        limbs[0] = acc as u64;
        acc >>= 64;
        acc += (ll >> 64) + 2 * (lh as u64 as u128);
        limbs[1] = acc as u64;
        acc >>= 64;
        acc += 2 * (lh >> 64) + (hh as u64 as u128);
        limbs[2] = acc as u64;
        acc >>= 64;
        acc += hh >> 64;
        limbs[3] = acc as u64;
        limbs.iter().map(|l| l.count_ones()).sum()
    }
    fn to_bitint(&self) -> BitInt {
        BitInt::from(*self)
    }
}

impl Lane for BitInt {
    fn zero() -> Self {
        BitInt::zero()
    }
    fn low_ones(count: usize) -> Self {
        BitInt::pow2(count).decrement().expect("nonzero")
    }
    fn with_bit(mut self, i: usize) -> Self {
        self.set_bit(i);
        self
    }
    fn or_shifted(&self, r: &Self, shift: usize) -> Self {
        // callers only shift r above every set bit of self, so + is |
        let mut out = self.clone();
        out.add_shifted(r, shift);
        out
    }
    fn bit_len(&self) -> usize {
        BitInt::bit_len(self)
    }
    fn next_same_weight(&self) -> Option<Self> {
        super::next_same_weight(self)
    }
    fn low_u64(&self) -> u64 {
        BitInt::low_u64(self)
    }
    fn square_weight(&self) -> u32 {
        self.square().weight()
    }
    fn to_bitint(&self) -> BitInt {
        self.clone()
    }
}
