//! Candidate search for odd `n` with `s(n²) ∈ {4, 5}`.
//!
//! Every odd `n` with `s(n²) = 4` is `1 + 2^ℓ·m` with `m` odd and then
//! `s(m + 2^(ℓ-1)·m²) = 3`. For `s(n²) = 5` the three shapes
//! `3 + 2^(1+ℓ2)·m`, `3 + 4m` and `1 + 2^ℓ1 + 2^(ℓ1+ℓ2)·m` lead to
//! analogous conditions on a target expression `T(m)`.
//!
//! The search grows the binary word of `m` from its lowest bit upwards.
//! Once the low `λ` bits of `m` are known, the bits of `T(m)` below the
//! frontier `F(λ)` can no longer change, and a word whose frozen part
//! already holds too many ones is dropped together with all its extensions.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigbits::{BitInt, BitWord};
use crate::error::{Error, Result};
use crate::record::SolutionRecord;

const CANCEL_POLL: u64 = 1 << 12;

/// `coeff · 2^shift · m^power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: u64,
    pub shift: u32,
    pub power: u8,
}

impl Term {
    const fn new(coeff: u64, shift: u32, power: u8) -> Term {
        Term { coeff, shift, power }
    }
}

/// One shape of `n` in terms of an odd `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    /// `n = 1 + 2^ℓ·m`, `s(m + 2^(ℓ-1)·m²) = 3`.
    S4Main { ell: u32 },
    /// `n = 3 + 2^(1+ℓ2)·m` with `ℓ2 ≥ 2`, `s(m(3 + 2^ℓ2·m)) = 3`.
    S5A { ell2: u32 },
    /// `n = 3 + 4m`, `s((2m + 1)(m + 1)) = 4`.
    S5B,
    /// `n = 1 + 2^ℓ1 + 2^(ℓ1+ℓ2)·m` with `ℓ1 ≥ 2`.
    S5C { ell1: u32, ell2: u32 },
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::S4Main { ell } => write!(f, "s4-main(l={ell})"),
            Variant::S5A { ell2 } => write!(f, "s5-a(l2={ell2})"),
            Variant::S5B => write!(f, "s5-b"),
            Variant::S5C { ell1, ell2 } => write!(f, "s5-c(l1={ell1},l2={ell2})"),
        }
    }
}

impl Variant {
    /// `s(n²)` of the solutions.
    pub fn square_weight(&self) -> u32 {
        match self {
            Variant::S4Main { .. } => 4,
            _ => 5,
        }
    }

    /// `s(n) - s(m)`.
    pub fn base_weight(&self) -> u32 {
        match self {
            Variant::S4Main { .. } => 1,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Variant::S4Main { ell } => ell >= 1,
            Variant::S5A { ell2 } => ell2 >= 2,
            Variant::S5B => true,
            Variant::S5C { ell1, ell2 } => ell1 >= 2 && ell2 >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidQuery(format!("shift parameters out of range for {self}")))
        }
    }

    /// `n` for a given `m`.
    pub fn n_of(&self, m: &BitInt) -> BitInt {
        let (mut n, shift) = match *self {
            Variant::S4Main { ell } => (BitInt::one(), ell),
            Variant::S5A { ell2 } => (BitInt::from(3u64), 1 + ell2),
            Variant::S5B => (BitInt::from(3u64), 2),
            Variant::S5C { ell1, ell2 } => (&BitInt::one() + &BitInt::pow2(ell1 as usize), ell1 + ell2),
        };
        n.add_shifted(m, shift as usize);
        n
    }

    /// The shape of odd `n` with `s(n²) = k` and its `m`. `None` for the
    /// few `n` that fit no shape (`n ∈ {1, 3}` and `n = 1 + 2^t`).
    pub fn classify(n: &BitInt, k: u32) -> Option<(Variant, BitInt)> {
        if !n.is_odd() || n.weight() < 2 {
            return None;
        }
        let rest = n.shift_right(1);
        let l1 = rest.trailing_zeros()? + 1;
        match k {
            4 => Some((Variant::S4Main { ell: l1 as u32 }, n.shift_right(l1))),
            5 => {
                let high = n.shift_right(l1 + 1);
                let l2 = high.trailing_zeros()? + 1;
                let m = n.shift_right(l1 + l2);
                let v = match (l1, l2) {
                    (1, 1) => Variant::S5B,
                    (1, l2) => Variant::S5A { ell2: l2 as u32 },
                    (l1, l2) => Variant::S5C { ell1: l1 as u32, ell2: l2 as u32 },
                };
                Some((v, m))
            }
            _ => None,
        }
    }

    /// The shapes searched for `s(n²) = k` and `s(n) ≤ lambda_max`, with
    /// every shift parameter bounded by `2·lambda_max`.
    pub fn all(k: u32, lambda_max: u32) -> Result<Vec<Variant>> {
        let b = shift_bound(lambda_max);
        match k {
            4 => Ok((1..=b).map(|ell| Variant::S4Main { ell }).collect()),
            5 => {
                let mut v: Vec<Variant> = (2..=b).map(|ell2| Variant::S5A { ell2 }).collect();
                v.push(Variant::S5B);
                for ell1 in 2..=b {
                    v.extend((1..=b).map(|ell2| Variant::S5C { ell1, ell2 }));
                }
                Ok(v)
            }
            k => Err(Error::InvalidQuery(format!("candidate search covers s(n^2) in {{4, 5}}, got {k}"))),
        }
    }

    pub fn target(&self) -> TargetExpression {
        let (terms, target_weight) = match *self {
            Variant::S4Main { ell } => (vec![Term::new(1, 0, 1), Term::new(1, ell - 1, 2)], 3),
            Variant::S5A { ell2 } => (vec![Term::new(3, 0, 1), Term::new(1, ell2, 2)], 3),
            Variant::S5B => (vec![Term::new(1, 0, 0), Term::new(3, 0, 1), Term::new(2, 0, 2)], 4),
            Variant::S5C { ell1, ell2 } => (
                vec![
                    Term::new(1, ell1, 0),
                    Term::new(1, ell2 + 1, 1),
                    Term::new(1, ell1 + ell2 + 1, 1),
                    Term::new(1, ell1 + 2 * ell2, 2),
                ],
                3,
            ),
        };
        TargetExpression { variant: *self, terms, target_weight }
    }
}

/// Largest shift parameter searched for weight bound `lambda_max`.
pub fn shift_bound(lambda_max: u32) -> u32 {
    crate::structure::ell_bound_s4(lambda_max)
}

/// `T(m) = Σ terms`, with `s(T(m)) = target_weight` equivalent to
/// `s(n²) = variant.square_weight()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetExpression {
    pub variant: Variant,
    pub terms: Vec<Term>,
    pub target_weight: u32,
}

impl TargetExpression {
    pub fn eval(&self, m: &BitInt) -> BitInt {
        let sq = self.terms.iter().any(|t| t.power == 2).then(|| m.square());
        let mut sum = BitInt::zero();
        for t in &self.terms {
            let base = match t.power {
                0 => BitInt::one(),
                1 => m.clone(),
                _ => sq.clone().expect("square computed"),
            };
            sum.add_shifted(&(&base * &BitInt::from(t.coeff)), t.shift as usize);
        }
        sum
    }

    /// Lowest bit of `T` that can still change once the low `len` bits of
    /// `m` are fixed: `m = w + 2^len·r` moves `c·2^s·m` from bit `s + len`
    /// on and `c·2^s·m²` from bit `s + len + 1` on.
    pub fn frontier(&self, len: usize) -> usize {
        self.terms
            .iter()
            .filter_map(|t| match t.power {
                0 => None,
                1 => Some(t.shift as usize + len),
                _ => Some(t.shift as usize + len + 1),
            })
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Keep/reject rule for a sum with frontier `frontier`: the frozen ones
    /// plus one for a nonzero high part must not exceed the target.
    fn admits(&self, sum: &BitInt, frontier: usize) -> bool {
        let low = sum.weight_below(frontier);
        let high = u32::from(sum.bit_len() > frontier);
        low + high <= self.target_weight
    }
}

/// Whether some `m` whose low bits are `word` can still solve `s(T(m)) = target`.
/// Rejection is final: every extension of a rejected word is rejected.
pub fn is_candidate(word: &BitWord, t: &TargetExpression) -> bool {
    let sum = t.eval(&word.to_int());
    t.admits(&sum, t.frontier(word.len()))
}

/// A word on the search stack together with its memoized target sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateState {
    m: BitInt,
    len: usize,
    weight_used: u32,
    sum: BitInt,
    low_weight: u32,
}

impl CandidateState {
    /// The seed word `1`, or `None` if it is already rejected.
    pub fn root(t: &TargetExpression) -> Option<CandidateState> {
        let m = BitInt::one();
        let sum = t.eval(&m);
        let f = t.frontier(1);
        t.admits(&sum, f).then(|| CandidateState { low_weight: sum.weight_below(f), m, len: 1, weight_used: 1, sum })
    }

    /// `b·word`, or `None` if it is rejected.
    pub fn extend(&self, bit: bool, t: &TargetExpression) -> Option<CandidateState> {
        let next = self.grow(bit, t);
        t.admits(&next.sum, t.frontier(next.len)).then_some(next)
    }

    fn grow(&self, bit: bool, t: &TargetExpression) -> CandidateState {
        let p = self.len;
        let mut m = self.m.clone();
        let mut sum = self.sum.clone();
        if bit {
            for term in &t.terms {
                let s = term.shift as usize;
                let c = BitInt::from(term.coeff);
                match term.power {
                    0 => {}
                    1 => sum.add_shifted(&c, s + p),
                    _ => {
                        // (m + 2^p)² - m² = 2^(p+1)·m + 2^(2p)
                        let cm = if term.coeff == 1 { self.m.clone() } else { &self.m * &c };
                        sum.add_shifted(&cm, s + p + 1);
                        sum.add_shifted(&c, s + 2 * p);
                    }
                }
            }
            m.set_bit(p);
        }
        let low_weight = sum.weight_below(t.frontier(p + 1));
        CandidateState { m, len: p + 1, weight_used: self.weight_used + u32::from(bit), sum, low_weight }
    }

    pub fn word(&self) -> BitWord {
        BitWord::from_int_padded(&self.m, self.len).expect("length covers value")
    }

    pub fn value(&self) -> &BitInt {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight_used(&self) -> u32 {
        self.weight_used
    }

    /// Ones of `T` already frozen below the frontier.
    pub fn low_weight(&self) -> u32 {
        self.low_weight
    }

    pub fn sum(&self) -> &BitInt {
        &self.sum
    }

    fn leading_zeros(&self) -> usize {
        self.len - self.m.bit_len()
    }
}

/// Stop rule for runs of leading zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroGuard {
    /// Push `0ω` only while the zero run `lz(0ω)` is at most as long as the
    /// significant part of `ω`.
    #[default]
    Run,
    /// Push `0ω` only while `2·lz(0ω) < |ω|`. Stricter than [`ZeroGuard::Run`];
    /// it misses `m = 1011` and hence `n = 91`.
    Half,
    /// No rule; the search then needs a length limit.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOrder {
    /// Stack; `1ω` is pushed before `0ω`, so `0ω` is explored first.
    #[default]
    DepthFirst,
    /// Stack with the opposite push order.
    DepthFirstOnesFirst,
    /// Queue.
    BreadthFirst,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CandidateOptions<'a> {
    pub guard: ZeroGuard,
    pub order: SearchOrder,
    /// Words longer than this are not extended.
    pub max_len: Option<usize>,
    pub cancel: Option<&'a AtomicBool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CandidateStats {
    /// Candidate words taken from the stack.
    pub nodes: u64,
    pub max_stack: usize,
    /// Longest word taken from the stack.
    pub max_len: usize,
}

impl CandidateStats {
    fn merge(&mut self, other: &CandidateStats) {
        self.nodes += other.nodes;
        self.max_stack = self.max_stack.max(other.max_stack);
        self.max_len = self.max_len.max(other.max_len);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateOutcome {
    pub records: Vec<SolutionRecord>,
    pub stats: CandidateStats,
    pub truncated: bool,
}

/// All odd `n` of the given shape with `s(n²) = variant.square_weight()` and
/// `s(n) ≤ lambda_max`, found by extending candidate words of `m` from the
/// seed `1`. Sorted by `n`.
pub fn max_integer(lambda_max: u32, variant: Variant, opts: &CandidateOptions<'_>) -> Result<CandidateOutcome> {
    variant.validate()?;
    if opts.guard == ZeroGuard::None && opts.max_len.is_none() {
        return Err(Error::InvalidQuery("a search without zero guard needs a length limit".into()));
    }
    let t = variant.target();
    let mut stats = CandidateStats::default();
    let mut records = Vec::new();
    let Some(budget) = lambda_max.checked_sub(variant.base_weight()).filter(|b| *b >= 1) else {
        return Ok(CandidateOutcome { records, stats, truncated: false });
    };
    let mut queue: VecDeque<CandidateState> = CandidateState::root(&t).into_iter().collect();
    let mut truncated = false;
    while let Some(state) = match opts.order {
        SearchOrder::BreadthFirst => queue.pop_front(),
        _ => queue.pop_back(),
    } {
        stats.nodes += 1;
        stats.max_len = stats.max_len.max(state.len);
        if stats.nodes % CANCEL_POLL == 0 && opts.cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            truncated = true;
            break;
        }
        if state.leading_zeros() == 0 && state.sum.weight() == t.target_weight {
            let n = variant.n_of(&state.m);
            let r = SolutionRecord::new(n);
            debug_assert_eq!(r.weight_n2, variant.square_weight());
            records.push(r);
        }
        if opts.max_len.is_some_and(|l| state.len >= l) {
            continue;
        }
        let one = (state.weight_used < budget).then(|| state.extend(true, &t)).flatten();
        let zero_allowed = match opts.guard {
            ZeroGuard::Run => state.leading_zeros() < state.m.bit_len(),
            ZeroGuard::Half => 2 * (state.leading_zeros() + 1) < state.len,
            ZeroGuard::None => true,
        };
        let zero = zero_allowed.then(|| state.extend(false, &t)).flatten();
        match opts.order {
            SearchOrder::DepthFirstOnesFirst => queue.extend(zero.into_iter().chain(one)),
            _ => queue.extend(one.into_iter().chain(zero)),
        }
        stats.max_stack = stats.max_stack.max(queue.len());
    }
    records.sort();
    Ok(CandidateOutcome { records, stats, truncated })
}

/// `n = 1 + 2^t + 2^(t+1)`, `1 + 2 + 2^t` or `1 + 2^t + 2^(2t-1)` for some
/// `t ≥ 3`: the odd `n` of weight 3 with `s(n²) = 5`.
pub fn in_weight3_families(n: &BitInt) -> bool {
    if n.weight() != 3 || !n.is_odd() {
        return false;
    }
    let ones: Vec<usize> = n.ones().collect();
    let (a, b) = (ones[1], ones[2]);
    (a >= 3 && b == a + 1) || (a == 1 && b >= 3) || (a >= 3 && b == 2 * a - 1)
}

/// The sets `E_{k,λ}` for `λ ≤ lambda_max`, keyed by `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ESets {
    pub k: u32,
    pub lambda_max: u32,
    pub by_weight: BTreeMap<u32, Vec<SolutionRecord>>,
    /// Members of the weight-3 families met by the search, left out of
    /// `by_weight` because the full families are infinite.
    pub family_members: Vec<SolutionRecord>,
    pub stats: CandidateStats,
    pub variants: usize,
    pub truncated: bool,
}

impl ESets {
    /// `⋃ E_{k,λ}` over `lo ≤ λ ≤ hi`, sorted.
    pub fn union(&self, lo: u32, hi: u32) -> Vec<SolutionRecord> {
        let mut all: Vec<SolutionRecord> = self.by_weight.range(lo..=hi).flat_map(|(_, v)| v.iter().cloned()).collect();
        all.sort();
        all
    }
}

/// Odd `n` with `s(n²) = k ∈ {4, 5}` and `s(n) ≤ lambda_max`, grouped by
/// `s(n)`. The shapes run in parallel, each as one sequential search.
/// For `k = 5` the members of the weight-3 families are reported apart.
pub fn e_sets(k: u32, lambda_max: u32, opts: &CandidateOptions<'_>) -> Result<ESets> {
    let variants = Variant::all(k, lambda_max)?;
    let outcomes: Vec<CandidateOutcome> =
        variants.par_iter().map(|v| max_integer(lambda_max, *v, opts)).collect::<Result<_>>()?;
    let mut stats = CandidateStats::default();
    let mut all = Vec::new();
    let mut truncated = false;
    for o in outcomes {
        stats.merge(&o.stats);
        truncated |= o.truncated;
        all.extend(o.records);
    }
    all.sort();
    all.dedup();
    let (family_members, sporadic): (Vec<_>, Vec<_>) = all.into_iter().partition(|r| k == 5 && in_weight3_families(&r.n));
    let mut by_weight: BTreeMap<u32, Vec<SolutionRecord>> = (1..=lambda_max).map(|l| (l, Vec::new())).collect();
    for r in sporadic {
        by_weight.entry(r.weight_n).or_default().push(r);
    }
    Ok(ESets { k, lambda_max, by_weight, family_members, stats, variants: variants.len(), truncated })
}

/// `E_{k,λ}`: odd `n` with `s(n²) = k` and `s(n) = lambda`. For `k = 5`,
/// `λ = 3` only members outside the weight-3 families are returned.
pub fn e_set(k: u32, lambda: u32, opts: &CandidateOptions<'_>) -> Result<Vec<SolutionRecord>> {
    if lambda == 0 {
        return Err(Error::InvalidQuery("weight must be at least 1".into()));
    }
    Ok(e_sets(k, lambda, opts)?.by_weight.remove(&lambda).unwrap_or_default())
}
