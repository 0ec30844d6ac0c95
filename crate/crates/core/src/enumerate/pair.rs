use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::delta::{delta_set_with, DeltaQuery, SearchOptions, SearchStats};
use crate::bigbits::BitInt;
use crate::error::{Error, Result};
use crate::record::SolutionRecord;
use crate::structure::kaneko_stoll_bound;

/// How a table row's search bound is derived from the product bound
/// `x1·x0 < 2^B` of the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundConvention {
    /// Each row searches below its own product bound `B`.
    Product,
    /// Every row of the table searches below the largest `B` of the table.
    ColumnMax,
    /// Each row searches below `B - 1`, a bound on each factor separately.
    PerFactor,
}

impl BoundConvention {
    /// The convention the published tables for `k` and `s(x1·x0) = p` follow.
    pub fn published(k: u32, product_weight: u32) -> BoundConvention {
        match (k, product_weight) {
            (9 | 10, _) | (11, 2) => BoundConvention::ColumnMax,
            (11, _) => BoundConvention::Product,
            _ => BoundConvention::PerFactor,
        }
    }
}

/// Search for `(x1, x0)` in `Δ(high) × Δ(low)` solving
/// `s(x1) + s(x0) = k`, `s(x1²) + s(x1·x0) + s(x0²) = k` with all five
/// weights at least 2, optionally with `s(x1·x0)` fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairQuery {
    pub k: u32,
    pub high: DeltaQuery,
    pub low: DeltaQuery,
    pub product_weight: Option<u32>,
}

impl PairQuery {
    pub fn new(k: u32, high: DeltaQuery, low: DeltaQuery, product_weight: Option<u32>) -> Result<Self> {
        high.validate()?;
        low.validate()?;
        if high.weight + low.weight != k {
            return Err(Error::InvalidQuery(format!("s(x1) + s(x0) = {} + {} != k = {k}", high.weight, low.weight)));
        }
        if let Some(p) = product_weight {
            if p < 2 || p + 4 > k {
                return Err(Error::InvalidQuery(format!("s(x1*x0) = {p} impossible for k = {k}")));
            }
        }
        Ok(PairQuery { k, high, low, product_weight })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairSolution {
    pub x1: BitInt,
    pub x0: BitInt,
    pub s_x1_sq: u32,
    pub s_x1x0: u32,
    pub s_x0_sq: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairOutcome {
    pub solutions: Vec<PairSolution>,
    pub high_size: usize,
    pub low_size: usize,
    pub pairs_checked: u64,
    pub stats: SearchStats,
    pub truncated: bool,
}

pub fn pair_search(q: &PairQuery) -> Result<PairOutcome> {
    pair_search_with(q, &SearchOptions::default())
}

fn product_weight(a: &SolutionRecord, b: &SolutionRecord) -> u32 {
    match (a.n.to_u64(), b.n.to_u64()) {
        (Some(x), Some(y)) => (x as u128 * y as u128).count_ones(),
        _ => a.n.mul(&b.n).weight(),
    }
}

pub fn pair_search_with(q: &PairQuery, opts: &SearchOptions<'_>) -> Result<PairOutcome> {
    let high = delta_set_with(&q.high, opts)?;
    let low = delta_set_with(&q.low, opts)?;
    let k = q.k;
    let solutions: Vec<Vec<PairSolution>> = high
        .records
        .par_iter()
        .map(|x1| {
            let mut out = Vec::new();
            if x1.weight_n < 2 || x1.weight_n2 < 2 {
                return out;
            }
            for x0 in &low.records {
                if x0.weight_n < 2 || x0.weight_n2 < 2 || x1.weight_n2 + x0.weight_n2 + 2 > k {
                    continue;
                }
                let p = product_weight(x1, x0);
                if p < 2 || q.product_weight.is_some_and(|want| want != p) {
                    continue;
                }
                if x1.weight_n2 + p + x0.weight_n2 == k {
                    out.push(PairSolution {
                        x1: x1.n.clone(),
                        x0: x0.n.clone(),
                        s_x1_sq: x1.weight_n2,
                        s_x1x0: p,
                        s_x0_sq: x0.weight_n2,
                    });
                }
            }
            out
        })
        .collect();
    let mut solutions: Vec<PairSolution> = solutions.into_iter().flatten().collect();
    solutions.sort();
    Ok(PairOutcome {
        solutions,
        high_size: high.records.len(),
        low_size: low.records.len(),
        pairs_checked: high.records.len() as u64 * low.records.len() as u64,
        stats: high.stats.merge(low.stats),
        truncated: high.truncated || low.truncated,
    })
}

/// Rows of the table of Δ-products to search for `k` when `s(x1·x0) = p`,
/// `p ∈ {2, 3}`. Rows run over `s(x1) = ⌈k/2⌉ ..= k - 2` with
/// `s(x0) = k - s(x1)`; both squares are capped at `k - p - 2`.
pub fn pair_table(k: u32, product_weight: u32, convention: BoundConvention) -> Result<Vec<PairQuery>> {
    if !(2..=3).contains(&product_weight) {
        return Err(Error::UnsupportedProductWeight(product_weight));
    }
    if k < product_weight + 4 {
        return Err(Error::InvalidQuery(format!("k = {k} too small for s(x1*x0) = {product_weight}")));
    }
    let cap = k - product_weight - 2;
    let rows: Vec<(u32, u32)> = (k.div_ceil(2)..=k - 2).map(|s1| (s1, k - s1)).collect();
    let bounds = rows
        .iter()
        .map(|&(s1, s0)| kaneko_stoll_bound(s1, s0, product_weight))
        .collect::<Result<Vec<u32>>>()?;
    let widest = bounds.iter().copied().max().unwrap_or(0);
    rows.iter()
        .zip(&bounds)
        .map(|(&(s1, s0), &b)| {
            let m = match convention {
                BoundConvention::Product => b,
                BoundConvention::ColumnMax => widest,
                BoundConvention::PerFactor => b - 1,
            };
            PairQuery::new(k, DeltaQuery::new(s1, cap, m)?, DeltaQuery::new(s0, cap, m)?, Some(product_weight))
        })
        .collect()
}
