//! Fixed-weight enumeration and the searches built on it: the sets of odd
//! `n < 2^m` with `s(n) = ℓ1` and `s(n²) ≤ ℓ2` ([`delta_set`]), the global
//! scan for `s(n) = s(n²) = k` ([`scan`]) and the two-factor pair search
//! ([`pair_search`]).
//!
//! Work is cut into shards by fixing the lowest set bits of `n` (bit 0, the
//! second set bit `a` and, when enough weight is left, the third set bit).
//! Shards run on the rayon pool of the caller; each collects into its own
//! buffer and the buffers are merged and sorted at the end, so results do
//! not depend on the number of threads.

mod delta;
pub(crate) mod lane;
mod pair;

use crate::bigbits::{low_square_window_weight, BitInt};

pub use delta::{delta_set, delta_set_with, scan, scan_with, DeltaQuery, ScanQuery, SearchOptions, SearchOutcome, SearchStats};
pub use pair::{pair_search, pair_search_with, pair_table, BoundConvention, PairOutcome, PairQuery, PairSolution};

use lane::Lane;

/// The smallest integer larger than `n` with the same weight.
///
/// If `(n)₂ = x 0 1^(b+1) 0^c` then the answer is `x 1 0^(c+1) 1^b`; the
/// steps below build it with shifts and one increment. Zero has no successor
/// and maps to zero.
pub fn next_same_weight(n: &BitInt) -> Option<BitInt> {
    let c = n.trailing_zeros()?;
    let mut v = n.shift_right(c);
    v.add_shifted(&BitInt::one(), 0);
    let b = v.trailing_zeros().expect("nonzero") - 1;
    let mut v = v.shift_left(c);
    v.set_bit(b);
    v.decrement()
}

/// Prefilter from the low bits of `n`: returns `false` (reject) only if the
/// lowest `window + 1` bits of `n²` already hold more than `cap` ones.
/// Never rejects an `n` with `s(n²) ≤ cap`.
pub fn prefilter_square_weight(n: &BitInt, cap: u32, window: u32) -> bool {
    low_square_window_weight(n.low_u64(), window).map_or(true, |w| w <= cap)
}

/// A block of the search space: `n = prefix | r << free_from` for every `r`
/// of weight `free_weight` with `n < 2^max_bits`.
#[derive(Debug, Clone)]
pub(crate) struct Shard<L> {
    prefix: L,
    free_from: usize,
    free_weight: usize,
    max_bits: usize,
}

impl<L: Lane> Shard<L> {
    /// Calls `f` on every member in increasing order; `f` returns `false` to stop.
    #[inline]
    pub(crate) fn for_each(&self, mut f: impl FnMut(&L) -> bool) {
        if self.max_bits < self.free_from {
            return;
        }
        let room = self.max_bits - self.free_from;
        if self.free_weight > room {
            return;
        }
        if self.free_weight == 0 {
            f(&self.prefix);
            return;
        }
        let mut r = L::low_ones(self.free_weight);
        loop {
            if !f(&self.prefix.or_shifted(&r, self.free_from)) {
                return;
            }
            match r.next_same_weight() {
                Some(next) if next.bit_len() <= room => r = next,
                _ => return,
            }
        }
    }

    /// Number of members, `C(room, free_weight)`.
    pub(crate) fn size(&self) -> u128 {
        if self.max_bits < self.free_from {
            return 0;
        }
        binomial((self.max_bits - self.free_from) as u64, self.free_weight as u64)
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Shards covering the odd integers `n < 2^max_bits` of weight `weight`,
/// optionally restricted to second set bit `a`. Larger partitions are cut
/// again by the third set bit.
pub(crate) fn odd_shards<L: Lane>(weight: usize, max_bits: usize, a: Option<usize>) -> Vec<Shard<L>> {
    let mut shards = Vec::new();
    if weight == 0 || max_bits == 0 {
        return shards;
    }
    let one = L::zero().with_bit(0);
    if weight == 1 {
        if a.is_none() {
            shards.push(Shard { prefix: one, free_from: 1, free_weight: 0, max_bits });
        }
        return shards;
    }
    if weight > max_bits {
        return shards;
    }
    let last_a = max_bits - weight + 1;
    let partitions: Vec<usize> = match a {
        Some(a) if a >= 1 && a <= last_a => vec![a],
        Some(_) => vec![],
        None => (1..=last_a).collect(),
    };
    for a in partitions {
        let with_a = one.clone().with_bit(a);
        if weight == 2 {
            shards.push(Shard { prefix: with_a, free_from: a + 1, free_weight: 0, max_bits });
            continue;
        }
        for b in (a + 1)..=(max_bits - weight + 2) {
            shards.push(Shard { prefix: with_a.clone().with_bit(b), free_from: b + 1, free_weight: weight - 3, max_bits });
        }
    }
    shards
}

/// All integers `n < 2^max_bits` of weight `weight`, in increasing order.
///
/// With `odd_only`, only odd `n`; with `a`, only odd `n` whose second lowest
/// set bit sits at position `a`, i.e. `n = 1 + 2^a + 2^(a+1)·r`.
/// Inconsistent parameters give an empty iterator.
pub fn iterate_fixed_weight(weight: usize, max_bits: usize, odd_only: bool, a: Option<usize>) -> FixedWeightIter {
    let shard = match (odd_only || a.is_some(), a) {
        (_, Some(a)) => {
            if weight < 2 || a == 0 || a + weight - 1 > max_bits {
                None
            } else {
                Some(Shard { prefix: BitInt::one().with_bit(a), free_from: a + 1, free_weight: weight - 2, max_bits })
            }
        }
        (true, None) => (weight >= 1).then(|| Shard { prefix: BitInt::one(), free_from: 1, free_weight: weight - 1, max_bits }),
        (false, None) => Some(Shard { prefix: BitInt::zero(), free_from: 0, free_weight: weight, max_bits }),
    };
    FixedWeightIter::new(shard)
}

/// Iterator returned by [`iterate_fixed_weight`].
pub struct FixedWeightIter {
    shard: Option<Shard<BitInt>>,
    next_r: Option<BitInt>,
}

impl FixedWeightIter {
    fn new(shard: Option<Shard<BitInt>>) -> Self {
        let next_r = shard.as_ref().and_then(|s| {
            let room = s.max_bits.checked_sub(s.free_from)?;
            (s.free_weight <= room).then(|| <BitInt as Lane>::low_ones(s.free_weight))
        });
        FixedWeightIter { shard, next_r }
    }
}

impl Iterator for FixedWeightIter {
    type Item = BitInt;

    fn next(&mut self) -> Option<BitInt> {
        let shard = self.shard.as_ref()?;
        let r = self.next_r.take()?;
        let room = shard.max_bits - shard.free_from;
        self.next_r = next_same_weight(&r).filter(|v| v.bit_len() <= room);
        Some(shard.prefix.or_shifted(&r, shard.free_from))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(it: impl Iterator<Item = BitInt>) -> Vec<u64> {
        it.map(|v| v.to_u64().unwrap()).collect()
    }

    fn brute_next(n: u64) -> u64 {
        (n + 1..).find(|m| m.count_ones() == n.count_ones()).unwrap()
    }

    #[test]
    fn next_examples() {
        let next = |n: u64| next_same_weight(&BitInt::from(n)).unwrap().to_u64().unwrap();
        assert_eq!(next(11), 13);
        assert_eq!(next(1), 2);
        assert_eq!(next(7), 11);
        assert_eq!(next_same_weight(&BitInt::zero()), None);
    }

    #[test]
    fn next_agrees_with_linear_scan() {
        for n in 1u64..(1 << 16) {
            let expected = brute_next(n);
            assert_eq!(next_same_weight(&BitInt::from(n)).unwrap().to_u64(), Some(expected), "n = {n}");
            assert_eq!(n.next_same_weight(), Some(expected));
            assert_eq!((n as u128).next_same_weight(), Some(expected as u128));
        }
    }

    #[test]
    fn next_crosses_limb_boundaries() {
        let n = BitInt::pow2(64).decrement().unwrap(); // 1^64
        let m = next_same_weight(&n).unwrap();
        assert_eq!(m, &BitInt::pow2(64) + &BitInt::pow2(63).decrement().unwrap());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(ints(iterate_fixed_weight(2, 4, true, None)), vec![3, 5, 9]);
        assert_eq!(ints(iterate_fixed_weight(3, 5, true, Some(1))), vec![7, 11, 19]);
        assert_eq!(ints(iterate_fixed_weight(2, 3, false, None)), vec![3, 5, 6]);
        assert_eq!(ints(iterate_fixed_weight(1, 5, true, None)), vec![1]);
        assert_eq!(ints(iterate_fixed_weight(2, 6, true, Some(3))), vec![9]);
        // inconsistent parameters give nothing
        assert!(ints(iterate_fixed_weight(6, 5, true, None)).is_empty());
        assert!(ints(iterate_fixed_weight(3, 5, true, Some(4))).is_empty());
        assert!(ints(iterate_fixed_weight(1, 5, true, Some(1))).is_empty());
        assert!(ints(iterate_fixed_weight(0, 5, true, None)).is_empty());
        assert_eq!(ints(iterate_fixed_weight(0, 5, false, None)), vec![0]);
    }

    #[test]
    fn counts_are_binomial() {
        for m in 1..=14usize {
            for k in 1..=m {
                let count = iterate_fixed_weight(k, m, true, None).count() as u128;
                assert_eq!(count, binomial(m as u64 - 1, k as u64 - 1), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn stream_is_increasing_and_matches_repeated_next() {
        let all: Vec<BitInt> = iterate_fixed_weight(4, 12, false, None).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|v| v.weight() == 4 && v.bit_len() <= 12));
        let mut cur = BitInt::from(15u64);
        for v in &all {
            assert_eq!(v, &cur);
            cur = next_same_weight(&cur).unwrap();
        }
        assert!(cur.bit_len() > 12);
    }

    #[test]
    fn shards_partition_the_odd_range() {
        for m in 1..=12usize {
            for k in 1..=m {
                let mut from_shards: Vec<u64> = Vec::new();
                for s in odd_shards::<u64>(k, m, None) {
                    s.for_each(|n| {
                        from_shards.push(*n);
                        true
                    });
                }
                from_shards.sort_unstable();
                let direct = ints(iterate_fixed_weight(k, m, true, None));
                assert_eq!(from_shards, direct, "k={k} m={m}");
                let sizes: u128 = odd_shards::<u64>(k, m, None).iter().map(|s| s.size()).sum();
                assert_eq!(sizes, direct.len() as u128);
            }
        }
    }

    #[test]
    fn prefilter_examples() {
        // (2^63 - 1)² ≡ 2^64 + 1 (mod 2^65): the window holds only two ones
        let n = &BitInt::pow2(79) + &BitInt::from((1u64 << 63) - 1);
        assert_eq!(n.bit_len(), 80);
        assert!(prefilter_square_weight(&n, 4, 64));
        assert_eq!(n.square().low_bits(65).weight(), 2);
        // 11² = 121 = 1111001₂ already has five ones in the window
        let n = &BitInt::pow2(79) + &BitInt::from(11u64);
        assert!(!prefilter_square_weight(&n, 4, 64));
        assert!(n.square().weight() > 4);
    }

    #[test]
    fn prefilter_is_sound_below_2_pow_22() {
        for n in (1u64..(1 << 22)).step_by(2) {
            let w = (n * n).count_ones();
            for window in [1u32, 5, 11, 21, 64] {
                assert!(prefilter_square_weight(&BitInt::from(n), w, window), "n={n} window={window}");
            }
        }
    }
}
