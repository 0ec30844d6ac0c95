//! Block decompositions of odd integers and the summands of their squares.
//!
//! An odd `n` is written as `x_m 0^(l_m) … x_1 0^(l_1) x_0` with odd blocks
//! `x_i`. Then `n²` is the exact sum of `y_{i,j} = x_i·x_j` placed at shift
//! `l_{i,i} = 2·ĥ_i` on the diagonal and `l_{i,j} = ĥ_i + ĥ_j + 1` off it,
//! where `ĥ_j` is the bit position at which block `x_j` starts. Lengths are
//! bit counts throughout.

mod bounds;
mod family;
mod patterns;

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::bigbits::{BitInt, BitWord};
use crate::error::{Error, Result};

pub use bounds::{ell_bound_s4, factorization_constant, kaneko_stoll_bound};
pub use family::{builtin_families, verify_family, Expectation, Family, FamilyReport, FamilyRow, FamilyTerm};
pub use patterns::{
    in_e3, is_s3n_2, is_s3n_3, is_s3n_3_listed, is_s3n_4_form, repeat_10_11, s3n_4_blocks, square_pattern_10rep,
};

/// Blocks `x_0` (lowest) to `x_m` and the zero gaps `l_1..l_m` between them;
/// `gaps[i]` sits between `blocks[i]` and `blocks[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    blocks: Vec<BitWord>,
    gaps: Vec<usize>,
}

impl BlockDecomposition {
    /// Checks that every block is the expansion of an odd integer (lowest and
    /// highest bit set) and every gap is positive.
    pub fn new(blocks: Vec<BitWord>, gaps: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || gaps.len() + 1 != blocks.len() {
            return Err(Error::InvalidQuery(format!("{} blocks need {} gaps, got {}", blocks.len(), blocks.len().saturating_sub(1), gaps.len())));
        }
        for b in &blocks {
            if b.bit(0) != Some(true) || b.top() != Some(true) {
                return Err(Error::InvalidQuery(format!("block {b} is not an odd expansion")));
            }
        }
        if gaps.contains(&0) {
            return Err(Error::InvalidQuery("gaps must be positive".into()));
        }
        Ok(BlockDecomposition { blocks, gaps })
    }

    pub fn blocks(&self) -> &[BitWord] {
        &self.blocks
    }

    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    /// Index `m` of the top block.
    pub fn m(&self) -> usize {
        self.gaps.len()
    }

    /// `ĥ_j`: combined length of `0^(l_j) x_{j-1} … 0^(l_1) x_0`.
    pub fn hat(&self, j: usize) -> usize {
        (1..=j).map(|i| self.gaps[i - 1] + self.blocks[i - 1].len()).sum()
    }

    /// `l_{i,j}`, the shift of `y_{i,j}` in the square.
    pub fn shift(&self, i: usize, j: usize) -> usize {
        if i == j {
            2 * self.hat(i)
        } else {
            self.hat(i) + self.hat(j) + 1
        }
    }

    pub fn min_gap(&self) -> Option<usize> {
        self.gaps.iter().copied().min()
    }

    pub fn max_block_len(&self) -> usize {
        self.blocks.iter().map(BitWord::len).max().unwrap_or(0)
    }

    pub fn reassemble(&self) -> BitInt {
        let mut n = BitInt::zero();
        for (j, b) in self.blocks.iter().enumerate() {
            n.add_shifted(&b.to_int(), self.hat(j));
        }
        n
    }
}

/// Splits odd `n` at every inner run of at least `min_gap` zeros
/// (`min_gap = 0` is treated as 1).
pub fn decompose(n: &BitInt, min_gap: usize) -> Result<BlockDecomposition> {
    if !n.is_odd() {
        return Err(Error::InvalidQuery(format!("decompose needs an odd integer, got {n}")));
    }
    let min_gap = min_gap.max(1);
    let ones: Vec<usize> = n.ones().collect();
    let mut blocks = Vec::new();
    let mut gaps = Vec::new();
    let mut start = 0;
    for w in ones.windows(2) {
        let run = w[1] - w[0] - 1;
        if run >= min_gap {
            blocks.push(word_between(n, start, w[0] + 1));
            gaps.push(run);
            start = w[1];
        }
    }
    blocks.push(word_between(n, start, n.bit_len()));
    BlockDecomposition::new(blocks, gaps)
}

fn word_between(n: &BitInt, start: usize, end: usize) -> BitWord {
    BitWord::from_lsb_bits((start..end).map(|i| n.bit(i)).collect())
}

/// `y_{i,j} = x_i·x_j` at bit offset `shift`, for `i ≤ j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub i: usize,
    pub j: usize,
    pub y: BitInt,
    pub shift: usize,
}

impl Summand {
    /// `u_{i,j} = 2^shift · y_{i,j}`.
    pub fn value(&self) -> BitInt {
        self.y.shift_left(self.shift)
    }

    pub fn span(&self) -> Range<usize> {
        self.shift..self.shift + self.y.bit_len()
    }
}

/// All summands of `n²` for the decomposition, ordered by `(i, j)`.
pub fn summands(d: &BlockDecomposition) -> Vec<Summand> {
    let xs: Vec<BitInt> = d.blocks.iter().map(BitWord::to_int).collect();
    let mut out = Vec::new();
    for i in 0..xs.len() {
        for j in i..xs.len() {
            let y = if i == j { xs[i].square() } else { xs[i].mul(&xs[j]) };
            out.push(Summand { i, j, y, shift: d.shift(i, j) });
        }
    }
    out
}

pub fn sum_of_summands(summands: &[Summand]) -> BitInt {
    let mut total = BitInt::zero();
    for s in summands {
        total.add_shifted(&s.y, s.shift);
    }
    total
}

/// Positions receiving a carry when `summands[p]` is added to the sum of
/// all the others.
pub fn carry_positions(summands: &[Summand], p: usize) -> Vec<usize> {
    let mut rest = BitInt::zero();
    for (idx, s) in summands.iter().enumerate() {
        if idx != p {
            rest.add_shifted(&s.y, s.shift);
        }
    }
    let u = summands[p].value();
    let sum = &rest + &u;
    let len = sum.bit_len();
    // carry into bit i is sum_i xor rest_i xor u_i
    (0..len).filter(|&i| sum.bit(i) ^ rest.bit(i) ^ u.bit(i)).collect()
}

/// Whether a carry caused by adding one of the two summands reaches a bit
/// position of the other one.
pub fn interferes(summands: &[Summand], p: usize, q: usize) -> bool {
    let reaches = |from: usize, to: usize| {
        let span = summands[to].span();
        carry_positions(summands, from).iter().any(|c| span.contains(c))
    };
    p != q && (reaches(p, q) || reaches(q, p))
}

/// Result of [`min_weight_over_shifts`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftSearch {
    pub min_weight: u32,
    /// Shift of each word at the first minimum found; at least one is zero.
    pub shifts: Vec<usize>,
    /// Weight of the sum once all supports are disjoint.
    pub tail_weight: u32,
}

/// Least weight of `Σ 2^(t_i)·w_i` over shift vectors in `[0, max_shift]^r`
/// with smallest shift zero. For two words the default `max_shift` is
/// `|a| + |b| + 2`; past it the supports are disjoint and every sum has
/// weight `tail_weight`, so the search covers all shifts.
pub fn min_weight_over_shifts(words: &[BitWord], max_shift: Option<usize>) -> ShiftSearch {
    let ints: Vec<BitInt> = words.iter().map(BitWord::to_int).collect();
    let tail_weight = ints.iter().map(BitInt::weight).sum();
    let max_shift = max_shift.unwrap_or_else(|| words.iter().map(BitWord::len).sum::<usize>() + 2);
    let r = ints.len();
    let mut best = ShiftSearch { min_weight: tail_weight, shifts: disjoint_shifts(words), tail_weight };
    if r == 0 {
        return best;
    }
    let mut t = vec![0usize; r];
    loop {
        if t.contains(&0) {
            let mut sum = BitInt::zero();
            for (x, &s) in ints.iter().zip(&t) {
                sum.add_shifted(x, s);
            }
            let w = sum.weight();
            if w < best.min_weight {
                best.min_weight = w;
                best.shifts = t.clone();
            }
        }
        // odometer over [0, max_shift]^r
        let mut pos = 0;
        while pos < r && t[pos] == max_shift {
            t[pos] = 0;
            pos += 1;
        }
        if pos == r {
            return best;
        }
        t[pos] += 1;
    }
}

fn disjoint_shifts(words: &[BitWord]) -> Vec<usize> {
    let mut at = 0;
    words
        .iter()
        .map(|w| {
            let s = at;
            at += w.len();
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn strs(d: &BlockDecomposition) -> Vec<String> {
        d.blocks().iter().map(|b| b.to_string()).collect()
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&BitInt::from(0b10001011u64), 2).unwrap();
        assert_eq!(strs(&d), vec!["1011", "1"]);
        assert_eq!(d.gaps(), &[3]);
        assert_eq!(d.m(), 1);
        let d = decompose(&BitInt::from(0b10001011u64), 1).unwrap();
        assert_eq!(strs(&d), vec!["11", "1", "1"]);
        assert_eq!(d.gaps(), &[1, 3]);
        for g in [1, 2, 5] {
            let d = decompose(&BitInt::from(7u64), g).unwrap();
            assert_eq!(strs(&d), vec!["111"]);
            assert!(d.gaps().is_empty());
        }
        assert!(decompose(&BitInt::from(6u64), 1).is_err());
    }

    #[test]
    fn construction_is_validated() {
        assert!(BlockDecomposition::new(vec![word("10")], vec![]).is_err());
        assert!(BlockDecomposition::new(vec![word("011")], vec![]).is_err());
        assert!(BlockDecomposition::new(vec![word("1"), word("1")], vec![0]).is_err());
        assert!(BlockDecomposition::new(vec![word("1"), word("1")], vec![]).is_err());
        let d = BlockDecomposition::new(vec![word("1011"), word("1")], vec![3]).unwrap();
        assert_eq!(d.reassemble(), BitInt::from(139u64));
    }

    #[test]
    fn shifts_follow_block_positions() {
        let d = decompose(&BitInt::from(0b11_000_101_00_1u64), 2).unwrap();
        assert_eq!(strs(&d), vec!["1", "101", "11"]);
        assert_eq!((d.hat(0), d.hat(1), d.hat(2)), (0, 3, 9));
        assert_eq!(d.shift(1, 1), 6);
        assert_eq!(d.shift(0, 2), 10);
        assert_eq!(d.shift(1, 2), 13);
    }

    #[test]
    fn two_block_square() {
        // (2^t + 1)² = 1 + 2^(t+1) + 2^(2t)
        for t in 2..40usize {
            let n = &BitInt::pow2(t) + &BitInt::one();
            let s = summands(&decompose(&n, 1).unwrap());
            let shifts: Vec<(usize, usize, usize)> = s.iter().map(|x| (x.i, x.j, x.shift)).collect();
            assert_eq!(shifts, vec![(0, 0, 0), (0, 1, t + 1), (1, 1, 2 * t)]);
            assert_eq!(sum_of_summands(&s), n.square());
        }
    }

    #[test]
    fn min_weight_examples() {
        let r = min_weight_over_shifts(&[word("11100001"), word("111")], None);
        assert!(r.min_weight >= 2);
        assert_eq!(r.tail_weight, 7);
        let r = min_weight_over_shifts(&[word("11100011"), word("111")], None);
        assert!(r.min_weight >= 2);
        let r = min_weight_over_shifts(&[word("1"), word("1")], None);
        assert_eq!((r.min_weight, r.shifts.clone()), (1, vec![0, 0]));
        let r = min_weight_over_shifts(&[word("111001000111001"), word("1001")], None);
        assert!(r.min_weight >= 2);
        // 111 + 1 = 1000
        let r = min_weight_over_shifts(&[word("111"), word("1")], None);
        assert_eq!(r.min_weight, 1);
        // three words: 11 + 1 + 1·2^2 = 1000
        let r = min_weight_over_shifts(&[word("11"), word("1"), word("1")], Some(4));
        assert_eq!(r.min_weight, 1);
    }

    #[test]
    fn interference_basic() {
        // 27 = 11011: y = 9 at shifts 0, 4 and 6
        let n = BitInt::from(0b11011u64);
        let d = decompose(&n, 1).unwrap();
        let s = summands(&d);
        assert_eq!(sum_of_summands(&s), n.square());
        assert!(!interferes(&s, 0, 1));
        // a summand never interferes with itself
        assert!(!interferes(&s, 1, 1));
    }
}
