use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigbits::BitInt;
use crate::error::{Error, Result};

/// `coeff · 2^(t_mul·t + offset)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTerm {
    pub coeff: u64,
    pub t_mul: u32,
    pub offset: i64,
}

/// Digit sums claimed for every member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Expectation {
    pub weight_n: Option<u32>,
    pub weight_n2: Option<u32>,
}

/// A parametrized form `n(t) = Σ terms`, valid from `t_min` on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    pub terms: Vec<FamilyTerm>,
    pub t_min: u32,
    pub expect: Expectation,
}

impl Family {
    /// `c1 · 2^(t + t_shift) + c0`.
    pub fn linear(c1: u64, t_shift: i64, c0: u64, t_min: u32, expect: Expectation) -> Family {
        let name = match t_shift {
            0 => format!("{c1}*2^t+{c0}"),
            s => format!("{c1}*2^(t{s:+})+{c0}"),
        };
        Family {
            name,
            terms: vec![FamilyTerm { coeff: c1, t_mul: 1, offset: t_shift }, FamilyTerm { coeff: c0, t_mul: 0, offset: 0 }],
            t_min,
            expect,
        }
    }

    pub fn eval(&self, t: u32) -> Result<BitInt> {
        let mut n = BitInt::zero();
        for term in &self.terms {
            let e = i64::from(term.t_mul) * i64::from(t) + term.offset;
            if e < 0 {
                return Err(Error::InvalidQuery(format!("{}: negative exponent at t = {t}", self.name)));
            }
            n.add_shifted(&BitInt::from(term.coeff), e as usize);
        }
        Ok(n)
    }
}

fn expect(weight_n: u32, weight_n2: u32) -> Expectation {
    Expectation { weight_n: Some(weight_n), weight_n2: Some(weight_n2) }
}

fn sum_of_powers(name: &str, exps: &[(u32, i64)], t_min: u32, e: Expectation) -> Family {
    Family {
        name: name.to_string(),
        terms: exps.iter().map(|&(t_mul, offset)| FamilyTerm { coeff: 1, t_mul, offset }).collect(),
        t_min,
        expect: e,
    }
}

/// The known infinite families: three with `s(n) = s(n²)`, two with
/// `s(n) = 14, s(n²) = 15`, `s(n²) = 3` and the three `s(n²) = 5` forms.
pub fn builtin_families() -> Vec<Family> {
    vec![
        Family::linear(111, 0, 111, 15, expect(12, 12)),
        Family::linear(23, 0, 1471, 21, expect(13, 13)),
        Family::linear(111, 0, 1919, 21, expect(16, 16)),
        Family::linear(23, 0, 2943, 23, expect(14, 15)),
        Family::linear(727, 0, 727, 21, expect(14, 15)),
        sum_of_powers("2^t+1", &[(1, 0), (0, 0)], 2, expect(2, 3)),
        sum_of_powers("1+2+2^t", &[(0, 0), (0, 1), (1, 0)], 3, expect(3, 5)),
        sum_of_powers("1+2^t+2^(t+1)", &[(0, 0), (1, 0), (1, 1)], 3, expect(3, 5)),
        sum_of_powers("1+2^t+2^(2t-1)", &[(0, 0), (1, 0), (2, -1)], 3, expect(3, 5)),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub t: u32,
    pub n: BitInt,
    pub s_n: u32,
    pub s_n2: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: String,
    pub expect: Expectation,
    pub rows: Vec<FamilyRow>,
    pub passed: bool,
}

impl FamilyReport {
    /// Plain-text table, one line per `t`.
    pub fn table(&self) -> String {
        let mut out = format!("family {}\n{:>6} {:>5} {:>6} {:>5}\n", self.family, "t", "s(n)", "s(n^2)", "ok");
        for r in &self.rows {
            let _ = writeln!(out, "{:>6} {:>5} {:>6} {:>5}", r.t, r.s_n, r.s_n2, if r.pass { "yes" } else { "NO" });
        }
        let _ = writeln!(out, "{}", if self.passed { "all rows pass" } else { "FAILED" });
        out
    }
}

/// Evaluates `family` for each `t` in range and checks the claimed digit
/// sums. Without claims, rows pass when they agree with the first row.
pub fn verify_family(family: &Family, t_range: RangeInclusive<u32>) -> Result<FamilyReport> {
    let rows = t_range
        .into_par_iter()
        .map(|t| {
            let n = family.eval(t)?;
            let (s_n, s_n2) = (n.weight(), n.square().weight());
            Ok(FamilyRow { t, n, s_n, s_n2, pass: true })
        })
        .collect::<Result<Vec<_>>>()?;
    let expect = match (family.expect, rows.first()) {
        (Expectation { weight_n: None, weight_n2: None }, Some(first)) => {
            Expectation { weight_n: Some(first.s_n), weight_n2: Some(first.s_n2) }
        }
        (e, _) => e,
    };
    let rows: Vec<FamilyRow> = rows
        .into_iter()
        .map(|mut r| {
            r.pass = expect.weight_n.is_none_or(|w| w == r.s_n) && expect.weight_n2.is_none_or(|w| w == r.s_n2);
            r
        })
        .collect();
    let passed = rows.iter().all(|r| r.pass);
    Ok(FamilyReport { family: family.name.clone(), expect: family.expect, rows, passed })
}
