//! Brute-force reference values.
//!
//! Both oracles walk the span one term at a time and share no code with the
//! solver or the real-number engine.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::types::SpanQuery;

/// Default ceiling on the number of terms the exact oracle will add.
pub const DEFAULT_ORACLE_CAP: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub f: u128,
    /// `(1/r) sum_{i=m}^{m+f-1} 1/i`, exact.
    pub sum_below: ExactRational,
    /// `(1/r) sum_{i=m}^{m+f} 1/i`, exact.
    pub sum_above: ExactRational,
}

/// Exact term count by incremental rational summation.
///
/// Fails with [`Error::CapExceeded`] once more than `cap` terms would be
/// needed to cross the target.
pub fn brute_force_f(query: &SpanQuery, cap: u64) -> Result<OracleResult> {
    let m = query.m();
    let target = BigInt::from(query.target());
    let mut sum = ExactRational::zero();
    let mut f: u64 = 0;
    loop {
        let prev = sum.clone();
        sum.add_unit_fraction(m + f);
        // A harmonic span never equals an integer, so `>=` is `>`.
        if sum.cmp_int(&target).is_ge() {
            let r = ExactRational::from_int(query.r());
            return Ok(OracleResult {
                f: f as u128,
                sum_below: &prev / &r,
                sum_above: &sum / &r,
            });
        }
        f += 1;
        if f > cap {
            return Err(Error::CapExceeded { cap });
        }
    }
}

/// Term count by Neumaier-compensated `f64` summation.
///
/// Not certified: it reproduces what a careful floating-point loop reports
/// and serves as a second opinion next to the exact oracle.
pub fn brute_force_f_compensated(query: &SpanQuery, cap: u64) -> Result<u128> {
    let m = query.m() as f64;
    let target = query.target() as f64;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut f: u64 = 0;
    loop {
        let term = 1.0 / (m + f as f64);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        if sum + comp >= target {
            return Ok(f as u128);
        }
        f += 1;
        if f > cap {
            return Err(Error::CapExceeded { cap });
        }
    }
}
