//! Certified term counts for harmonic spans.
//!
//! Given `m >= 2`, `q >= 1` and `r >= 1`, find the number `f` of consecutive
//! terms `1/(r*m), 1/(r*(m+1)), ...` whose sum stays strictly below `q`, with
//! a proof-carrying certificate, closed-form bounds and brute-force oracles.

pub mod bounds;
pub mod error;
pub mod interval;
pub mod oracle;
pub mod rational;
pub mod realnum;
pub mod solver;
pub mod types;

pub use bounds::{
    f_bounds, f_bounds_with, lemma_sandwich, midpoint_candidates, LemmaSandwich, MidpointCandidates,
};
pub use error::{Error, Result};
pub use interval::{Dyadic, RealInterval, Rounding};
pub use oracle::{brute_force_f, brute_force_f_compensated, OracleResult, DEFAULT_ORACLE_CAP};
pub use rational::{harmonic_span_exact, DecimalMode, ExactRational};
pub use realnum::{PrecisionPolicy, PRECISION_CAP_ENV};
pub use solver::{solve_f, sweep, verify_theorems, SweepRecord, TheoremReport};
pub use types::{
    validate_query, validate_query_with_cap, Backend, BoundsWindow, Certificate, Comparison,
    SpanQuery, SpanResult, SpanValue, Verdict, DEFAULT_QR_CAP,
};
