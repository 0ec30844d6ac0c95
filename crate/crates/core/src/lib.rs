//! Search and verification tools for equations on the binary digit sum
//! `s(n)`, chiefly `s(n) = s(n²) = k` and `s(n²) ∈ {4, 5}`.
//!
//! * [`bigbits`]: arbitrary-precision integers and bit words.
//! * [`enumerate`]: fixed-weight enumeration, Δ-sets, the global scan and
//!   the two-factor pair search.
//! * [`candidate`]: the candidate-word search for `s(n²) ∈ {4, 5}` and the
//!   sets `E_{k,λ}`.
//! * [`structure`]: block decompositions, square summands, digit-pattern
//!   oracles, product bounds and infinite families.
//! * [`record`]: result rows and the result file format.

pub mod bigbits;
pub mod candidate;
pub mod enumerate;
pub mod error;
pub mod record;
pub mod structure;

pub use bigbits::{BitInt, BitWord};
pub use error::{Error, Result};
pub use record::SolutionRecord;
