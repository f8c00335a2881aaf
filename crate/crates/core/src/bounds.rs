//! Closed-form bound window and midpoint candidates for the term count.
//!
//! With `x = q*r` and `F = m(e^x - 1)`:
//!
//! * `lb = ceil(F - e^x)`, `ub = floor(F)`
//! * `ml = floor(F - e^x/2)`, `mh = ml + 1`
//!
//! Each floor is certified by interval refinement. `F - e^x = (m-1)e^x - m`
//! and friends are never integers because `e^x` is irrational, so the
//! refinement always terminates.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::interval::{Dyadic, RealInterval};
use crate::rational::{harmonic_span_exact, ExactRational};
use crate::realnum::{certified_floor, exp_enclosure, ln_enclosure, PrecisionPolicy};
use crate::types::{validate_query, BoundsWindow, SpanQuery};

/// Largest `n - m` accepted by [`lemma_sandwich`].
pub const LEMMA_MAX_TERMS: u128 = 10_000;

const EXP_GUARD_BITS: u32 = 8;

/// The pair `(c, c + 1)` with `c = floor(m(e-1) - e/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MidpointCandidates {
    pub c: u128,
    pub candidates: (u128, u128),
}

/// `floor(k * e^x / 2^halvings)` and the precision that certified it.
fn floor_scaled_exp(
    k: &BigInt,
    halvings: i64,
    x: u32,
    policy: &PrecisionPolicy,
) -> Result<(BigInt, u32)> {
    let scale = RealInterval::point(Dyadic::new(k.clone(), -halvings), 0);
    certified_floor(
        |bits| exp_enclosure(x, bits + EXP_GUARD_BITS).mul(&scale),
        policy,
    )
}

fn to_u128(v: BigInt, what: &str) -> Result<u128> {
    v.to_u128().ok_or_else(|| Error::MagnitudeCap {
        reason: format!("{what} = {v} does not fit in 128 bits"),
    })
}

/// The bound window with the default precision policy.
pub fn f_bounds(query: &SpanQuery) -> Result<BoundsWindow> {
    f_bounds_with(query, &PrecisionPolicy::default())
}

pub fn f_bounds_with(query: &SpanQuery, policy: &PrecisionPolicy) -> Result<BoundsWindow> {
    let x = query.target();
    let m = BigInt::from(query.m());

    let (me, p1) = floor_scaled_exp(&m, 0, x, policy)?;
    let ub = to_u128(me - &m, "ub")?;

    let (m1e, p2) = floor_scaled_exp(&(&m - 1), 0, x, policy)?;
    // ceil((m-1)e^x - m) = floor((m-1)e^x) - m + 1; never below 1 for m >= 2.
    let lb_raw = m1e - &m + 1;
    let lb = if lb_raw < BigInt::from(1) {
        1
    } else {
        to_u128(lb_raw, "lb")?
    };

    let (mid, p3) = floor_scaled_exp(&(&m * 2 - 1), 1, x, policy)?;
    let ml = to_u128(mid - &m, "ml")?;

    let (ex, p4) = floor_scaled_exp(&BigInt::from(1), 0, x, policy)?;
    let width_cap = to_u128(ex + 1, "width_cap")?;

    Ok(BoundsWindow {
        lb,
        ml,
        mh: ml + 1,
        ub,
        width_cap,
        precision_bits: p1.max(p2).max(p3).max(p4),
    })
}

/// The two candidates for `q = r = 1`.
pub fn midpoint_candidates(m: u64) -> Result<MidpointCandidates> {
    midpoint_candidates_with(m, &PrecisionPolicy::default())
}

pub fn midpoint_candidates_with(m: u64, policy: &PrecisionPolicy) -> Result<MidpointCandidates> {
    if m < 2 {
        return Err(Error::MDomain(m as i64));
    }
    let mb = BigInt::from(m);
    let (mid, _) = floor_scaled_exp(&(&mb * 2 - 1), 1, 1, policy)?;
    let c = to_u128(mid - &mb, "midpoint")?;
    Ok(MidpointCandidates {
        c,
        candidates: (c, c + 1),
    })
}

/// `sum_{i=m+1}^{n+1} 1/i < ln((n+1)/m) < sum_{i=m}^{n} 1/i`, with both sums exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaSandwich {
    pub low: ExactRational,
    pub mid: RealInterval,
    pub high: ExactRational,
    /// Both inequalities certified strict.
    pub holds: bool,
}

pub fn lemma_sandwich(m: u64, n: u64) -> Result<LemmaSandwich> {
    lemma_sandwich_with(m, n, &PrecisionPolicy::default())
}

pub fn lemma_sandwich_with(m: u64, n: u64, policy: &PrecisionPolicy) -> Result<LemmaSandwich> {
    if m < 2 || n <= m {
        return Err(Error::Domain(format!(
            "sandwich needs 2 <= m < n (got m = {m}, n = {n})"
        )));
    }
    if (n - m) as u128 > LEMMA_MAX_TERMS {
        return Err(Error::RangeTooLarge(format!(
            "{} terms exceeds the exact sandwich cap of {LEMMA_MAX_TERMS}",
            n - m
        )));
    }
    let (m, n) = (m as u128, n as u128);
    let low = harmonic_span_exact(m + 1, n + 1);
    let high = harmonic_span_exact(m, n);
    let mut mid = None;
    for bits in policy.schedule() {
        let iv = ln_enclosure(n + 1, m, bits)?;
        let separated = iv.lo().cmp_rational(&low).is_gt() && iv.hi().cmp_rational(&high).is_lt();
        mid = Some(iv);
        if separated {
            break;
        }
    }
    let mid = mid.expect("schedule yields at least one precision");
    let holds = mid.lo().cmp_rational(&low).is_gt() && mid.hi().cmp_rational(&high).is_lt();
    Ok(LemmaSandwich {
        low,
        mid,
        high,
        holds,
    })
}

/// Convenience for callers holding raw integers.
pub fn f_bounds_raw(m: i64, q: i64, r: i64) -> Result<BoundsWindow> {
    f_bounds(&validate_query(m, q, r)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(m: i64, q: i64, r: i64) -> BoundsWindow {
        f_bounds_raw(m, q, r).unwrap()
    }

    #[test]
    fn table_windows() {
        let w = window(5, 1, 1);
        assert_eq!((w.lb, w.ml, w.mh, w.ub), (6, 7, 8, 8));
        let w = window(23, 2, 3);
        assert_eq!((w.lb, w.ml, w.mh, w.ub), (8853, 9054, 9055, 9255));
        let w = window(3, 10, 1);
        assert_eq!((w.lb, w.ml, w.mh, w.ub), (44050, 55063, 55064, 66076));
        assert_eq!(w.width_cap, 22027);
    }

    #[test]
    fn smallest_query() {
        // ceil(e - 2) = 1, floor(2(e-1)) = 3.
        let w = window(2, 1, 1);
        assert_eq!((w.lb, w.ub), (1, 3));
        assert_eq!(w.width_cap, 3);
    }

    #[test]
    fn midpoints() {
        assert_eq!(midpoint_candidates(1000).unwrap().candidates, (1716, 1717));
        assert_eq!(midpoint_candidates(105).unwrap().candidates, (179, 180));
        assert_eq!(midpoint_candidates(5).unwrap().candidates, (7, 8));
        assert!(midpoint_candidates(1).is_err());
    }

    #[test]
    fn sandwich_examples() {
        let s = lemma_sandwich(2, 3).unwrap();
        assert_eq!(s.low, ExactRational::new(7, 12));
        assert_eq!(s.high, ExactRational::new(5, 6));
        assert!(s.holds);
        assert!((s.mid.midpoint().to_f64() - std::f64::consts::LN_2).abs() < 1e-15);

        let s = lemma_sandwich(5, 11).unwrap();
        assert_eq!(s.low, harmonic_span_exact(6, 12));
        assert_eq!(s.high, ExactRational::new(25961, 27720));
        assert!(s.holds);

        assert!(lemma_sandwich(2, 2).is_err());
        assert!(matches!(
            lemma_sandwich(2, 20_003),
            Err(Error::RangeTooLarge(_))
        ));
    }

    #[test]
    fn window_invariants_over_small_grid() {
        for m in 2..60i64 {
            for (q, r) in [(1, 1), (1, 2), (2, 1), (3, 1), (2, 2)] {
                let w = window(m, q, r);
                assert!(
                    w.lb <= w.ml && w.ml < w.mh && w.mh <= w.ub,
                    "m={m} q={q} r={r}"
                );
                assert!(w.ub - w.lb <= w.width_cap);
                assert!(w.lb >= 1);
            }
            let w = window(m, 1, 1);
            assert_eq!(
                midpoint_candidates(m as u64).unwrap().candidates,
                (w.ml, w.mh)
            );
        }
    }

    #[test]
    fn floors_stable_under_doubled_start() {
        let q = validate_query(777, 2, 3).unwrap();
        let a = f_bounds_with(&q, &PrecisionPolicy::new(96, 65536).unwrap()).unwrap();
        let b = f_bounds_with(&q, &PrecisionPolicy::new(192, 65536).unwrap()).unwrap();
        assert_eq!(
            (a.lb, a.ml, a.ub, a.width_cap),
            (b.lb, b.ml, b.ub, b.width_cap)
        );
    }
}
