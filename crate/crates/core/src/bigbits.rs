//! Arbitrary-precision non-negative integers and finite binary words.
//!
//! [`BitInt`] is the integer side: a value with exact bit-level access
//! (weight, length, squaring, shifting). [`BitWord`] is the word side: a
//! finite string of bits where leading zeros are significant, so `011` and
//! `11` are different words with the same integer value.
//!
//! Length convention: [`BitInt::bit_len`] is the number of bits in the
//! minimal binary expansion, so `bit_len(1) == 1` and `bit_len(0) == 0`.
//! Texts that index the top bit instead (top index = `bit_len - 1`) are off
//! by one against this.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Shl, Shr};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const LIMB_BITS: usize = 64;

/// Arbitrary-precision non-negative integer, stored as 64-bit limbs,
/// least-significant first, with no trailing zero limbs.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitInt {
    limbs: Vec<u64>,
}

impl BitInt {
    pub const fn zero() -> Self {
        BitInt { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        BitInt { limbs: vec![1] }
    }

    /// `2^exp`.
    pub fn pow2(exp: usize) -> Self {
        let mut v = BitInt::zero();
        v.set_bit(exp);
        v
    }

    fn from_limbs(mut limbs: Vec<u64>) -> Self {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        BitInt { limbs }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.limbs.first().is_some_and(|l| l & 1 == 1)
    }

    /// Binary digit sum.
    pub fn weight(&self) -> u32 {
        self.limbs.iter().map(|l| l.count_ones()).sum()
    }

    /// Number of bits of the minimal binary expansion; 0 for zero.
    pub fn bit_len(&self) -> usize {
        match self.limbs.last() {
            None => 0,
            Some(top) => (self.limbs.len() - 1) * LIMB_BITS + (LIMB_BITS - top.leading_zeros() as usize),
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs
            .get(i / LIMB_BITS)
            .is_some_and(|l| (l >> (i % LIMB_BITS)) & 1 == 1)
    }

    pub fn set_bit(&mut self, i: usize) {
        let idx = i / LIMB_BITS;
        if self.limbs.len() <= idx {
            self.limbs.resize(idx + 1, 0);
        }
        self.limbs[idx] |= 1 << (i % LIMB_BITS);
    }

    /// Index of the lowest set bit, `None` for zero.
    pub fn trailing_zeros(&self) -> Option<usize> {
        self.limbs
            .iter()
            .enumerate()
            .find(|(_, l)| **l != 0)
            .map(|(i, l)| i * LIMB_BITS + l.trailing_zeros() as usize)
    }

    /// Positions of the set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.limbs.iter().enumerate().flat_map(|(i, &limb)| {
            let mut rest = limb;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * LIMB_BITS + tz)
            })
        })
    }

    /// The value modulo `2^64`.
    pub fn low_u64(&self) -> u64 {
        self.limbs.first().copied().unwrap_or(0)
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0] as u128),
            2 => Some(self.limbs[0] as u128 | (self.limbs[1] as u128) << 64),
            _ => None,
        }
    }

    /// The value modulo `2^width`.
    pub fn low_bits(&self, width: usize) -> BitInt {
        let full = width / LIMB_BITS;
        let rem = width % LIMB_BITS;
        if full >= self.limbs.len() {
            return self.clone();
        }
        let mut limbs = self.limbs[..full].to_vec();
        if rem != 0 {
            limbs.push(self.limbs[full] & ((1u64 << rem) - 1));
        }
        BitInt::from_limbs(limbs)
    }

    /// Weight of the value modulo `2^width`, without allocating.
    pub fn weight_below(&self, width: usize) -> u32 {
        let full = (width / LIMB_BITS).min(self.limbs.len());
        let mut w: u32 = self.limbs[..full].iter().map(|l| l.count_ones()).sum();
        let rem = width % LIMB_BITS;
        if rem != 0 && full < self.limbs.len() && full == width / LIMB_BITS {
            w += (self.limbs[full] & ((1u64 << rem) - 1)).count_ones();
        }
        w
    }

    /// `self · 2^shift`.
    pub fn shift_left(&self, shift: usize) -> BitInt {
        if self.is_zero() {
            return BitInt::zero();
        }
        let limb_shift = shift / LIMB_BITS;
        let bit_shift = shift % LIMB_BITS;
        let mut limbs = vec![0u64; limb_shift];
        limbs.reserve(self.limbs.len() + 1);
        if bit_shift == 0 {
            limbs.extend_from_slice(&self.limbs);
        } else {
            let mut carry = 0u64;
            for &l in &self.limbs {
                limbs.push((l << bit_shift) | carry);
                carry = l >> (LIMB_BITS - bit_shift);
            }
            limbs.push(carry);
        }
        BitInt::from_limbs(limbs)
    }

    /// `floor(self / 2^shift)`.
    pub fn shift_right(&self, shift: usize) -> BitInt {
        let limb_shift = shift / LIMB_BITS;
        if limb_shift >= self.limbs.len() {
            return BitInt::zero();
        }
        let bit_shift = shift % LIMB_BITS;
        let src = &self.limbs[limb_shift..];
        let limbs = if bit_shift == 0 {
            src.to_vec()
        } else {
            (0..src.len())
                .map(|i| {
                    let hi = src.get(i + 1).map_or(0, |h| h << (LIMB_BITS - bit_shift));
                    (src[i] >> bit_shift) | hi
                })
                .collect()
        };
        BitInt::from_limbs(limbs)
    }

    /// `self += other · 2^shift`.
    pub fn add_shifted(&mut self, other: &BitInt, shift: usize) {
        if other.is_zero() {
            return;
        }
        let limb_shift = shift / LIMB_BITS;
        let bit_shift = shift % LIMB_BITS;
        let needed = limb_shift + other.limbs.len() + 1;
        if self.limbs.len() < needed {
            self.limbs.resize(needed, 0);
        }
        let mut carry = 0u64;
        let mut spill = 0u64;
        let mut idx = limb_shift;
        for &l in &other.limbs {
            let word = if bit_shift == 0 {
                l
            } else {
                let w = (l << bit_shift) | spill;
                spill = l >> (LIMB_BITS - bit_shift);
                w
            };
            let (s1, c1) = self.limbs[idx].overflowing_add(word);
            let (s2, c2) = s1.overflowing_add(carry);
            self.limbs[idx] = s2;
            carry = (c1 as u64) + (c2 as u64);
            idx += 1;
        }
        let mut pending = spill as u128 + carry as u128;
        while pending != 0 {
            if idx == self.limbs.len() {
                self.limbs.push(0);
            }
            let sum = self.limbs[idx] as u128 + pending;
            self.limbs[idx] = sum as u64;
            pending = sum >> 64;
            idx += 1;
        }
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    /// `self - 1`, or `None` for zero.
    pub fn decrement(&self) -> Option<BitInt> {
        if self.is_zero() {
            return None;
        }
        let mut limbs = self.limbs.clone();
        for l in limbs.iter_mut() {
            let (v, borrow) = l.overflowing_sub(1);
            *l = v;
            if !borrow {
                break;
            }
        }
        Some(BitInt::from_limbs(limbs))
    }

    /// Schoolbook product. Operands in this crate stay within a few hundred
    /// bits, well below where sub-quadratic multiplication pays off.
    pub fn mul(&self, other: &BitInt) -> BitInt {
        if self.is_zero() || other.is_zero() {
            return BitInt::zero();
        }
        let mut out = vec![0u64; self.limbs.len() + other.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            let mut carry = 0u128;
            for (j, &b) in other.limbs.iter().enumerate() {
                let t = a as u128 * b as u128 + out[i + j] as u128 + carry;
                out[i + j] = t as u64;
                carry = t >> 64;
            }
            out[i + other.limbs.len()] = carry as u64;
        }
        BitInt::from_limbs(out)
    }

    /// `self²`; cross products are computed once and doubled.
    pub fn square(&self) -> BitInt {
        let n = self.limbs.len();
        if n == 0 {
            return BitInt::zero();
        }
        let mut out = vec![0u64; 2 * n];
        for i in 0..n {
            let mut carry = 0u128;
            for j in (i + 1)..n {
                let t = self.limbs[i] as u128 * self.limbs[j] as u128 + out[i + j] as u128 + carry;
                out[i + j] = t as u64;
                carry = t >> 64;
            }
            out[i + n] = carry as u64;
        }
        let mut top = 0u64;
        for l in out.iter_mut() {
            let next_top = *l >> 63;
            *l = (*l << 1) | top;
            top = next_top;
        }
        let mut carry = 0u128;
        for i in 0..n {
            let sq = self.limbs[i] as u128 * self.limbs[i] as u128;
            let lo = out[2 * i] as u128 + (sq as u64) as u128 + carry;
            out[2 * i] = lo as u64;
            let hi = out[2 * i + 1] as u128 + (sq >> 64) + (lo >> 64);
            out[2 * i + 1] = hi as u64;
            carry = hi >> 64;
        }
        BitInt::from_limbs(out)
    }

    /// Big-endian string of `'0'`/`'1'` characters; `"0"` for zero.
    pub fn to_binary_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        (0..self.bit_len()).rev().map(|i| if self.bit(i) { '1' } else { '0' }).collect()
    }

    /// Parses a big-endian `'0'`/`'1'` string; leading zeros are accepted and dropped.
    pub fn from_binary_str(s: &str) -> Result<BitInt> {
        if s.is_empty() {
            return Err(Error::ParseBinary(s.to_string()));
        }
        let mut v = BitInt::zero();
        for (i, c) in s.bytes().rev().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set_bit(i),
                _ => return Err(Error::ParseBinary(s.to_string())),
            }
        }
        Ok(v)
    }

    fn div_rem_small(&self, d: u64) -> (BitInt, u64) {
        let mut out = vec![0u64; self.limbs.len()];
        let mut rem = 0u128;
        for i in (0..self.limbs.len()).rev() {
            let cur = (rem << 64) | self.limbs[i] as u128;
            out[i] = (cur / d as u128) as u64;
            rem = cur % d as u128;
        }
        (BitInt::from_limbs(out), rem as u64)
    }

    fn mul_add_small(&mut self, m: u64, a: u64) {
        let mut carry = a as u128;
        for l in self.limbs.iter_mut() {
            let t = *l as u128 * m as u128 + carry;
            *l = t as u64;
            carry = t >> 64;
        }
        if carry != 0 {
            self.limbs.push(carry as u64);
        }
    }
}

impl From<u64> for BitInt {
    fn from(v: u64) -> Self {
        BitInt::from_limbs(vec![v])
    }
}

impl From<u32> for BitInt {
    fn from(v: u32) -> Self {
        BitInt::from(v as u64)
    }
}

impl From<u128> for BitInt {
    fn from(v: u128) -> Self {
        BitInt::from_limbs(vec![v as u64, (v >> 64) as u64])
    }
}

impl Ord for BitInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for BitInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&BitInt> for &BitInt {
    type Output = BitInt;
    fn add(self, rhs: &BitInt) -> BitInt {
        let mut out = self.clone();
        out.add_shifted(rhs, 0);
        out
    }
}

impl Add for BitInt {
    type Output = BitInt;
    fn add(mut self, rhs: BitInt) -> BitInt {
        self.add_shifted(&rhs, 0);
        self
    }
}

impl AddAssign<&BitInt> for BitInt {
    fn add_assign(&mut self, rhs: &BitInt) {
        self.add_shifted(rhs, 0);
    }
}

impl Mul<&BitInt> for &BitInt {
    type Output = BitInt;
    fn mul(self, rhs: &BitInt) -> BitInt {
        BitInt::mul(self, rhs)
    }
}

impl Shl<usize> for &BitInt {
    type Output = BitInt;
    fn shl(self, rhs: usize) -> BitInt {
        self.shift_left(rhs)
    }
}

impl Shl<usize> for BitInt {
    type Output = BitInt;
    fn shl(self, rhs: usize) -> BitInt {
        self.shift_left(rhs)
    }
}

impl Shr<usize> for &BitInt {
    type Output = BitInt;
    fn shr(self, rhs: usize) -> BitInt {
        self.shift_right(rhs)
    }
}

impl fmt::Display for BitInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const CHUNK: u64 = 10_000_000_000_000_000_000;
        if self.is_zero() {
            return f.pad("0");
        }
        let mut chunks = Vec::new();
        let mut rest = self.clone();
        while !rest.is_zero() {
            let (q, r) = rest.div_rem_small(CHUNK);
            chunks.push(r);
            rest = q;
        }
        let mut s = chunks.pop().unwrap().to_string();
        for c in chunks.iter().rev() {
            s.push_str(&format!("{c:019}"));
        }
        f.pad(&s)
    }
}

impl fmt::Debug for BitInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitInt({self})")
    }
}

impl FromStr for BitInt {
    type Err = Error;

    /// Decimal digits only.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::ParseDecimal(s.to_string()));
        }
        let mut v = BitInt::zero();
        for chunk in s.as_bytes().chunks(18) {
            let digits = std::str::from_utf8(chunk).expect("ascii digits");
            let part: u64 = digits.parse().map_err(|_| Error::ParseDecimal(s.to_string()))?;
            v.mul_add_small(10u64.pow(chunk.len() as u32), part);
            v = BitInt::from_limbs(std::mem::take(&mut v.limbs));
        }
        Ok(v)
    }
}

impl Serialize for BitInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `n² mod 2^width`, computed from `n mod 2^width` alone.
///
/// If `a ≡ b (mod 2^w)` then `a² ≡ b² (mod 2^w)`, so the low residue is all
/// that is needed.
pub fn low_bits_of_square(n_low: u64, width: u32) -> Result<u64> {
    if width > 64 {
        return Err(Error::WindowTooWide(width));
    }
    let sq = n_low.wrapping_mul(n_low);
    Ok(if width == 64 { sq } else { sq & ((1u64 << width) - 1) })
}

/// Weight of `n² mod 2^(width+1)` from `n mod 2^width` alone.
///
/// Writing `n = r + 2^width·p` with `r < 2^width`, the square is
/// `r² + 2^(width+1)·r·p + 2^(2·width)·p²`, so its lowest `width + 1` bits
/// depend on `r` only (for `width ≥ 1`).
pub fn low_square_window_weight(n_low: u64, width: u32) -> Result<u32> {
    if width > 64 || width == 0 {
        return Err(Error::WindowTooWide(width));
    }
    let r = if width == 64 { n_low } else { n_low & ((1u64 << width) - 1) };
    let sq = r as u128 * r as u128;
    let mask = (1u128 << (width + 1)) - 1;
    Ok((sq & mask).count_ones())
}

/// Finite binary word. Leading zeros are significant.
///
/// Stored least-significant bit first, so prepending a bit on the
/// high-order side (the common operation in the candidate search) is a push.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn empty() -> Self {
        BitWord { bits: Vec::new() }
    }

    /// Word from bits given least-significant first.
    pub fn from_lsb_bits(bits: Vec<bool>) -> Self {
        BitWord { bits }
    }

    /// Minimal expansion of `n` (empty for zero).
    pub fn from_int(n: &BitInt) -> Self {
        BitWord { bits: (0..n.bit_len()).map(|i| n.bit(i)).collect() }
    }

    /// Expansion of `n` left-padded with zeros to `len` bits.
    pub fn from_int_padded(n: &BitInt, len: usize) -> Result<Self> {
        if n.bit_len() > len {
            return Err(Error::WordTooShort { value_bits: n.bit_len(), len });
        }
        Ok(BitWord { bits: (0..len).map(|i| n.bit(i)).collect() })
    }

    pub fn to_int(&self) -> BitInt {
        let mut v = BitInt::zero();
        for (i, _) in self.bits.iter().enumerate().filter(|(_, b)| **b) {
            v.set_bit(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.bits.iter().filter(|b| **b).count() as u32
    }

    /// Bit at LSB-index `i`.
    pub fn bit(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn lsb_bits(&self) -> &[bool] {
        &self.bits
    }

    /// Most significant bit, `None` for the empty word.
    pub fn top(&self) -> Option<bool> {
        self.bits.last().copied()
    }

    /// Number of `0`s before the first `1` reading from the most significant end.
    pub fn leading_zeros(&self) -> usize {
        self.bits.iter().rev().take_while(|b| !**b).count()
    }

    /// `b·self`: the word with `b` written in front (on the high-order side).
    pub fn prepend(&self, b: bool) -> BitWord {
        let mut bits = Vec::with_capacity(self.bits.len() + 1);
        bits.extend_from_slice(&self.bits);
        bits.push(b);
        BitWord { bits }
    }

    /// `high·low`, i.e. `high` written in front of `low`.
    pub fn concat(high: &BitWord, low: &BitWord) -> BitWord {
        let mut bits = low.bits.clone();
        bits.extend_from_slice(&high.bits);
        BitWord { bits }
    }

    /// `0^count`.
    pub fn zeros(count: usize) -> BitWord {
        BitWord { bits: vec![false; count] }
    }

    /// `self^count`.
    pub fn repeat(&self, count: usize) -> BitWord {
        BitWord { bits: self.bits.repeat(count) }
    }

    /// Bits at LSB-indices `start..end` (half-open), as a word.
    pub fn slice(&self, start: usize, end: usize) -> Result<BitWord> {
        if start > end || end > self.bits.len() {
            return Err(Error::SliceOutOfRange { start, end, len: self.bits.len() });
        }
        Ok(BitWord { bits: self.bits[start..end].to_vec() })
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().rev().map(|b| if *b { '1' } else { '0' }).collect();
        f.pad(&s)
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord(\"{self}\")")
    }
}

impl Serialize for BitWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for BitWord {
    type Err = Error;

    /// Big-endian `'0'`/`'1'` string; the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .bytes()
            .rev()
            .map(|c| match c {
                b'0' => Ok(false),
                b'1' => Ok(true),
                _ => Err(Error::ParseBinary(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitWord { bits })
    }
}
