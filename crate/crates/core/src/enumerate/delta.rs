use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lane::Lane;
use super::{odd_shards, Shard};
use crate::bigbits::BitInt;
use crate::error::{Error, Result};
use crate::record::SolutionRecord;

/// Parameters of a Δ-set: odd `n < 2^max_bits` with `s(n) = weight` and
/// `s(n²) ≤ square_cap`, optionally only the partition whose second lowest
/// set bit is at `second_bit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaQuery {
    pub weight: u32,
    pub square_cap: u32,
    pub max_bits: u32,
    pub second_bit: Option<u32>,
}

impl DeltaQuery {
    pub fn new(weight: u32, square_cap: u32, max_bits: u32) -> Result<Self> {
        let q = DeltaQuery { weight, square_cap, max_bits, second_bit: None };
        q.validate()?;
        Ok(q)
    }

    pub fn partition(self, a: u32) -> Result<Self> {
        let q = DeltaQuery { second_bit: Some(a), ..self };
        q.validate()?;
        Ok(q)
    }

    /// Valid partition indices `1..=max_bits - weight + 1`.
    pub fn partitions(&self) -> std::ops::RangeInclusive<u32> {
        1..=(self.max_bits + 1).saturating_sub(self.weight)
    }

    pub fn validate(&self) -> Result<()> {
        if self.weight < 1 || self.weight > self.max_bits {
            return Err(Error::InvalidQuery(format!("need 1 <= l1 <= m, got l1={} m={}", self.weight, self.max_bits)));
        }
        if self.square_cap < 1 {
            return Err(Error::InvalidQuery("need l2 >= 1".into()));
        }
        if let Some(a) = self.second_bit {
            if self.weight < 2 || !self.partitions().contains(&a) {
                return Err(Error::InvalidQuery(format!(
                    "partition a={a} outside 1..={} for l1={} m={}",
                    self.max_bits + 1 - self.weight.min(self.max_bits + 1),
                    self.weight,
                    self.max_bits
                )));
            }
        }
        Ok(())
    }
}

/// Parameters of the global scan: odd `n < 2^max_bits` with `s(n) = s(n²) = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScanQuery {
    pub k: u32,
    pub max_bits: u32,
}

impl ScanQuery {
    pub fn new(k: u32, max_bits: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidQuery("need k >= 1".into()));
        }
        Ok(ScanQuery { k, max_bits })
    }
}

/// Knobs shared by the enumeration searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions<'a> {
    /// Width `L` of the low-bit square prefilter, `1..=64`.
    pub window: u32,
    /// Set from another thread to stop early; the outcome is then marked truncated.
    pub cancel: Option<&'a AtomicBool>,
    /// Apply the prefilter to partial prefixes and skip whole subtrees.
    pub prune: bool,
}

impl Default for SearchOptions<'_> {
    fn default() -> Self {
        SearchOptions { window: 64, cancel: None, prune: true }
    }
}

impl SearchOptions<'_> {
    fn check(&self) -> Result<()> {
        if !(1..=64).contains(&self.window) {
            return Err(Error::WindowTooWide(self.window));
        }
        Ok(())
    }

    fn cancelled(&self) -> bool {
        self.cancel.is_some_and(|c| c.load(Ordering::Relaxed))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Integers produced by the enumeration.
    pub enumerated: u64,
    /// Integers dropped by the prefilter before squaring.
    pub prefilter_rejected: u64,
    /// Integers skipped without enumeration because a low prefix failed
    /// the prefilter.
    pub pruned: u128,
    pub shards: u64,
    /// Size of the search space, `enumerated + pruned` unless truncated.
    pub planned: u128,
}

impl SearchStats {
    pub(crate) fn merge(self, o: SearchStats) -> SearchStats {
        SearchStats {
            enumerated: self.enumerated + o.enumerated,
            prefilter_rejected: self.prefilter_rejected + o.prefilter_rejected,
            pruned: self.pruned + o.pruned,
            shards: self.shards + o.shards,
            planned: self.planned + o.planned,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// Ascending by `n`.
    pub records: Vec<SolutionRecord>,
    pub stats: SearchStats,
    pub truncated: bool,
}

impl SearchOutcome {
    /// Share of the odd integers below `2^max_bits` that were found.
    pub fn proportion(&self, max_bits: u32) -> f64 {
        self.records.len() as f64 / 2f64.powi(max_bits as i32 - 1)
    }
}

const CANCEL_POLL: u64 = 1 << 16;

/// Free weight at which a pruned descent hands over to plain enumeration.
const LEAF_WEIGHT: usize = 2;

/// Walks one shard. With pruning on, bits above the shard prefix are fixed
/// one at a time from the bottom; a prefix `P` whose own square already
/// fails the prefilter is dropped with everything above it, since every
/// `n` extending `P` agrees with `P` on those low bits.
struct Walk<'o, L> {
    cap: u32,
    exact: bool,
    max_bits: usize,
    opts: &'o SearchOptions<'o>,
    found: Vec<(L, u32)>,
    stats: SearchStats,
    truncated: bool,
}

impl<L: Lane> Walk<'_, L> {
    fn prefix_keep(&self, prefix: &L, known_bits: usize) -> bool {
        let width = known_bits.min(self.opts.window as usize) as u32;
        prefix.prefilter_keep(self.cap, width)
    }

    fn descend(&mut self, prefix: L, free_from: usize, free_weight: usize) {
        if self.truncated {
            return;
        }
        if free_weight <= LEAF_WEIGHT || !self.opts.prune {
            self.leaf(&Shard { prefix, free_from, free_weight, max_bits: self.max_bits });
            return;
        }
        if self.opts.cancelled() {
            self.truncated = true;
            return;
        }
        for p in free_from..=self.max_bits - free_weight {
            let child = prefix.clone().with_bit(p);
            if self.prefix_keep(&child, p + 1) {
                self.descend(child, p + 1, free_weight - 1);
            } else {
                self.stats.pruned += super::binomial((self.max_bits - p - 1) as u64, (free_weight - 1) as u64);
            }
        }
    }

    fn leaf(&mut self, shard: &Shard<L>) {
        let (cap, exact, window, opts) = (self.cap, self.exact, self.opts.window, self.opts);
        let (found, stats, truncated) = (&mut self.found, &mut self.stats, &mut self.truncated);
        shard.for_each(|n| {
            stats.enumerated += 1;
            if stats.enumerated % CANCEL_POLL == 0 && opts.cancelled() {
                *truncated = true;
                return false;
            }
            if !n.prefilter_keep(cap, window) {
                stats.prefilter_rejected += 1;
                return true;
            }
            let w = n.square_weight();
            if w == cap || (!exact && w < cap) {
                found.push((n.clone(), w));
            }
            true
        });
    }
}

fn run_shard<L: Lane>(shard: &Shard<L>, cap: u32, exact: bool, opts: &SearchOptions<'_>) -> (Vec<(L, u32)>, SearchStats, bool) {
    let mut walk = Walk {
        cap,
        exact,
        max_bits: shard.max_bits,
        opts,
        found: Vec::new(),
        stats: SearchStats { shards: 1, planned: shard.size(), ..Default::default() },
        truncated: opts.cancelled(),
    };
    if walk.truncated {
        return (walk.found, walk.stats, true);
    }
    if opts.prune && shard.free_weight > 0 && !walk.prefix_keep(&shard.prefix, shard.free_from) {
        walk.stats.pruned = walk.stats.planned;
    } else {
        walk.descend(shard.prefix.clone(), shard.free_from, shard.free_weight);
    }
    (walk.found, walk.stats, walk.truncated)
}

fn run_shards<L: Lane>(shards: Vec<Shard<L>>, cap: u32, exact: bool, opts: &SearchOptions<'_>) -> SearchOutcome {
    let parts: Vec<_> = shards.par_iter().map(|s| run_shard(s, cap, exact, opts)).collect();
    let mut stats = SearchStats::default();
    let mut truncated = false;
    let mut found = Vec::new();
    for (f, s, t) in parts {
        found.extend(f);
        stats = stats.merge(s);
        truncated |= t;
    }
    found.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let records = found
        .into_iter()
        .map(|(n, w)| SolutionRecord::with_square_weight(n.to_bitint(), w))
        .collect();
    SearchOutcome { records, stats, truncated }
}

fn search(weight: u32, max_bits: u32, a: Option<u32>, cap: u32, exact: bool, opts: &SearchOptions<'_>) -> Result<SearchOutcome> {
    opts.check()?;
    let (w, m, a) = (weight as usize, max_bits as usize, a.map(|a| a as usize));
    Ok(if m <= 64 {
        run_shards(odd_shards::<u64>(w, m, a), cap, exact, opts)
    } else if m <= 128 {
        run_shards(odd_shards::<u128>(w, m, a), cap, exact, opts)
    } else {
        run_shards(odd_shards::<BitInt>(w, m, a), cap, exact, opts)
    })
}

/// The Δ-set of `q`, ascending. With a partition index only that partition
/// is searched; the partitions over all `a` are disjoint and cover the set.
pub fn delta_set(q: &DeltaQuery) -> Result<Vec<SolutionRecord>> {
    Ok(delta_set_with(q, &SearchOptions::default())?.records)
}

pub fn delta_set_with(q: &DeltaQuery, opts: &SearchOptions<'_>) -> Result<SearchOutcome> {
    q.validate()?;
    search(q.weight, q.max_bits, q.second_bit, q.square_cap, false, opts)
}

/// All odd `n < 2^max_bits` with `s(n) = s(n²) = k`, ascending.
pub fn scan(q: &ScanQuery) -> Result<Vec<SolutionRecord>> {
    Ok(scan_with(q, &SearchOptions::default())?.records)
}

pub fn scan_with(q: &ScanQuery, opts: &SearchOptions<'_>) -> Result<SearchOutcome> {
    search(q.k, q.max_bits, None, q.k, true, opts)
}
