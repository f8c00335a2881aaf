//! Enclosures of harmonic spans `sum_{i=m}^{n} 1/i` and harmonic numbers.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::ln::ln_enclosure;
use crate::error::{Error, Result};
use crate::interval::{Dyadic, RealInterval, Rounding};
use crate::rational::{harmonic_span_exact, ExactRational};
use crate::types::Backend;

/// Spans with at most this many terms are summed directly by [`span_enclosure`].
pub const DIRECT_MAX_TERMS: u128 = 1_000_000;

/// Hard limit for [`harmonic_span_enclosure`].
pub const DIRECT_RANGE_CAP: u128 = 100_000_000;

/// The asymptotic backend sums denominators below this directly and expands
/// the rest, keeping every Euler-Maclaurin argument at or above `ASYMPTOTIC_SPLIT - 1`.
pub const ASYMPTOTIC_SPLIT: u128 = 10_000;

// Largest Bernoulli index kept in the table: B_0 ..= B_{2 * (MAX_EM_TERMS + 1)}.
const MAX_EM_TERMS: usize = 60;
const MIN_EM_TERMS: usize = 2;
const FIXED_POINT_U128_MAX_BITS: u32 = 120;

/// Encloses `sum_{i=m}^{n} 1/i` by direct summation on the grid `2^-bits`.
///
/// Each term is rounded outward, so the width is at most `(n - m + 1) * 2^-bits`.
pub fn harmonic_span_enclosure(m: u128, n: u128, bits: u32) -> Result<RealInterval> {
    if m == 0 || n < m {
        return Err(Error::Domain(format!(
            "harmonic span needs 1 <= m <= n (got m = {m}, n = {n})"
        )));
    }
    let terms = n - m + 1;
    if terms > DIRECT_RANGE_CAP {
        return Err(Error::RangeTooLarge(format!(
            "{terms} terms exceeds the direct summation cap of {DIRECT_RANGE_CAP}"
        )));
    }
    let floor_sum = if bits <= FIXED_POINT_U128_MAX_BITS {
        let scale = 1u128 << bits;
        let mut acc = 0u128;
        for i in m..=n {
            acc += scale / i;
        }
        BigInt::from(acc)
    } else {
        let scale = BigUint::one() << bits as u64;
        let mut acc = BigUint::zero();
        for i in m..=n {
            acc += &scale / i;
        }
        BigInt::from(acc)
    };
    // floor(2^bits / i) is exact only when i is a power of two no larger than 2^bits.
    let exact_terms = (0..=bits.min(127))
        .map(|k| 1u128 << k)
        .filter(|p| (m..=n).contains(p))
        .count() as u128;
    let inexact = terms - exact_terms;
    let e = -(bits as i64);
    Ok(RealInterval::new(
        Dyadic::new(floor_sum.clone(), e),
        Dyadic::new(floor_sum + inexact, e),
        bits,
    ))
}

/// `B_k` (with `B_1 = -1/2`) for `k <= 2 * MAX_EM_TERMS + 2`.
pub fn bernoulli(k: usize) -> ExactRational {
    let table = bernoulli_table();
    assert!(k < table.len(), "Bernoulli index {k} beyond table");
    table[k].clone()
}

fn bernoulli_table() -> &'static [ExactRational] {
    static TABLE: OnceLock<Vec<ExactRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let len = 2 * (MAX_EM_TERMS + 1) + 1;
        let mut b: Vec<ExactRational> = Vec::with_capacity(len);
        b.push(ExactRational::one());
        for n in 1..len {
            // B_n = -1/(n+1) * sum_{k<n} C(n+1, k) B_k
            let mut sum = ExactRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                if !bk.is_zero() {
                    sum = &sum + &(&ExactRational::from_int(binom.clone()) * bk);
                }
                binom = binom * (n + 1 - k) / (k + 1);
            }
            b.push(-(&sum / &ExactRational::from_int(n as i64 + 1)));
        }
        b
    })
}

// |B_{2k}| / (2k)
fn em_coefficient(k: usize) -> ExactRational {
    &bernoulli(2 * k) / &ExactRational::from_int(2 * k as i64)
}

// Bound on the Euler-Maclaurin remainder of H_x after `terms` Bernoulli terms:
// the first omitted term, |B_{2K+2}| / ((2K+2) x^(2K+2)).
fn em_remainder(x: u128, terms: usize) -> ExactRational {
    let c = em_coefficient(terms + 1).abs();
    let pow = BigInt::from(x).pow(2 * terms as u32 + 2);
    &c / &ExactRational::from_int(pow)
}

// Fewest terms (at least MIN_EM_TERMS) whose remainder at x falls below 2^-target_bits;
// if none does, the term count with the smallest remainder.
fn em_terms_for(x: u128, target_bits: u32) -> usize {
    let target = ExactRational::new(1, BigInt::one() << target_bits as u64);
    let mut best = (MIN_EM_TERMS, em_remainder(x, MIN_EM_TERMS));
    for k in MIN_EM_TERMS..=MAX_EM_TERMS {
        let rem = em_remainder(x, k);
        if rem <= target {
            return k;
        }
        if rem < best.1 {
            best = (k, rem);
        }
    }
    best.0
}

// sum_{k=1}^{terms} B_{2k} / (2k x^(2k))
fn em_series(x: u128, terms: usize) -> ExactRational {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut pow = BigInt::one();
    let mut sum = ExactRational::zero();
    for k in 1..=terms {
        pow *= &x2;
        sum = &sum + &(&em_coefficient(k) / &ExactRational::from_int(pow.clone()));
    }
    sum
}

fn symmetric(radius: &ExactRational, grid_exp: i64, bits: u32) -> RealInterval {
    let r = Dyadic::from_ratio_fixed(radius.numer(), radius.denom(), grid_exp, Rounding::Up);
    RealInterval::new(r.neg(), r, bits)
}

/// Encloses `sum_{i=m}^{n} 1/i` through `H_n - H_{m-1}` with Euler-Maclaurin
/// expansions at both ends.
///
/// Denominators below [`ASYMPTOTIC_SPLIT`] are summed directly, so both
/// expansion points are large and the Euler-Mascheroni constant cancels.
pub fn harmonic_span_asymptotic(m: u128, n: u128, bits: u32) -> Result<RealInterval> {
    if m == 0 || n < m {
        return Err(Error::Domain(format!(
            "harmonic span needs 1 <= m <= n (got m = {m}, n = {n})"
        )));
    }
    let split = m.max(ASYMPTOTIC_SPLIT);
    if n < split {
        let guard = 128 - (n - m + 1).leading_zeros();
        let iv = harmonic_span_enclosure(m, n, bits + guard)?;
        return Ok(iv.pad_to_grid(-(bits as i64)).with_precision(bits));
    }
    let inner = bits + 8;
    let grid = -(inner as i64);

    // H_b - H_a with a = split - 1 and b = n.
    let a = split - 1;
    let b = n;
    let terms = em_terms_for(a, bits + 16);
    let mut tail = if b > a {
        ln_enclosure(b, a, inner)?
    } else {
        RealInterval::from_int(0, inner)
    };
    let half = |x: u128| ExactRational::new(1, BigInt::from(x) * 2u32);
    let rational = &(&(&half(b) - &half(a)) - &em_series(b, terms)) + &em_series(a, terms);
    tail = tail.add(&RealInterval::from_rational_fixed(&rational, grid, inner));
    let radius = &em_remainder(a, terms) + &em_remainder(b, terms);
    tail = tail.add(&symmetric(&radius, grid, inner));

    let total = if m < split {
        // Direct widths grow with the term count; absorb it in guard bits.
        let guard = 128 - (split - m).leading_zeros();
        harmonic_span_enclosure(m, split - 1, inner + guard)?.add(&tail)
    } else {
        tail
    };
    Ok(total.pad_to_grid(-(bits as i64)).with_precision(bits))
}

/// Encloses the harmonic number `H_n` for `n >= 10` by Euler-Maclaurin expansion.
pub fn harmonic_number_asymptotic(n: u128, bits: u32) -> Result<RealInterval> {
    if n < 10 {
        return Err(Error::Domain(format!(
            "asymptotic harmonic number needs n >= 10 (got {n})"
        )));
    }
    let inner = bits + 8;
    let grid = -(inner as i64);
    let terms = em_terms_for(n, bits + 16);
    let rational = &ExactRational::new(1, BigInt::from(n) * 2u32) - &em_series(n, terms);
    let value = ln_enclosure(n, 1, inner)?
        .add(&euler_gamma(inner))
        .add(&RealInterval::from_rational_fixed(&rational, grid, inner))
        .add(&symmetric(&em_remainder(n, terms), grid, inner));
    Ok(value.pad_to_grid(-(bits as i64)).with_precision(bits))
}

/// Encloses the Euler-Mascheroni constant on the grid `2^-bits`.
///
/// The sharpest enclosure computed so far is cached and reused for any
/// request at or below its precision.
pub fn euler_gamma(bits: u32) -> RealInterval {
    static CACHE: Mutex<Option<RealInterval>> = Mutex::new(None);
    if let Some(cached) = CACHE.lock().ok().and_then(|c| c.clone()) {
        if cached.precision_bits() >= bits {
            return cached;
        }
    }
    let fresh = compute_gamma(bits);
    if let Ok(mut slot) = CACHE.lock() {
        let better = slot
            .as_ref()
            .is_none_or(|c| c.precision_bits() < fresh.precision_bits());
        if better {
            *slot = Some(fresh.clone());
        }
    }
    fresh
}

// gamma = H_N - ln N - 1/(2N) + sum_k B_2k/(2k N^2k) - R, with H_N exact.
fn compute_gamma(bits: u32) -> RealInterval {
    let inner = bits + 8;
    let grid = -(inner as i64);
    let target = ExactRational::new(1, BigInt::one() << (bits + 16) as u64);
    let mut n: u128 = 64;
    let mut terms = em_terms_for(n, bits + 16);
    while em_remainder(n, terms) > target && n < (1 << 16) {
        n *= 2;
        terms = em_terms_for(n, bits + 16);
    }
    let h = harmonic_span_exact(1, n);
    let rational = &(&h - &ExactRational::new(1, BigInt::from(n) * 2u32)) + &em_series(n, terms);
    let value = RealInterval::from_rational_fixed(&rational, grid, inner)
        .sub(&ln_enclosure(n, 1, inner).expect("n >= 64"))
        .add(&symmetric(&em_remainder(n, terms), grid, inner));
    value.pad_to_grid(-(bits as i64)).with_precision(bits)
}

/// Encloses `sum_{i=m}^{n} 1/i`, choosing direct summation for spans of at most
/// [`DIRECT_MAX_TERMS`] terms and the asymptotic expansion above that.
pub fn span_enclosure(m: u128, n: u128, bits: u32) -> Result<(RealInterval, Backend)> {
    if m == 0 || n < m {
        return Err(Error::Domain(format!(
            "harmonic span needs 1 <= m <= n (got m = {m}, n = {n})"
        )));
    }
    if n - m < DIRECT_MAX_TERMS {
        Ok((harmonic_span_enclosure(m, n, bits)?, Backend::Interval))
    } else {
        Ok((harmonic_span_asymptotic(m, n, bits)?, Backend::Asymptotic))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), ExactRational::one());
        assert_eq!(bernoulli(1), ExactRational::new(-1, 2));
        assert_eq!(bernoulli(2), ExactRational::new(1, 6));
        assert_eq!(bernoulli(3), ExactRational::zero());
        assert_eq!(bernoulli(4), ExactRational::new(-1, 30));
        assert_eq!(bernoulli(12), ExactRational::new(-691, 2730));
        assert_eq!(bernoulli(20), ExactRational::new(-174611, 330));
    }

    #[test]
    fn em_coefficients_match_textbook_series() {
        // H_n ~ ln n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4) - 1/(252n^6)
        assert_eq!(em_coefficient(1), ExactRational::new(1, 12));
        assert_eq!(em_coefficient(2), ExactRational::new(-1, 120));
        assert_eq!(em_coefficient(3), ExactRational::new(1, 252));
    }

    #[test]
    fn direct_span_contains_exact_sum() {
        let iv = harmonic_span_enclosure(5, 11, 64).unwrap();
        assert!(iv.contains_rational(&ExactRational::new(25961, 27720)));
        assert!(iv.width() <= Dyadic::new(7, -64));
        let iv = harmonic_span_enclosure(5, 12, 64).unwrap();
        assert!((iv.midpoint().to_f64() - 1.0198773448773448).abs() < 1e-15);
        // A single power-of-two term is exact.
        let iv = harmonic_span_enclosure(8, 8, 64).unwrap();
        assert_eq!(iv.width(), Dyadic::zero());
        assert_eq!(iv.lo().to_rational(), ExactRational::new(1, 8));
        let iv = harmonic_span_enclosure(7, 7, 200).unwrap();
        assert!(iv.contains_rational(&ExactRational::new(1, 7)));
    }

    #[test]
    fn direct_span_rejects_bad_ranges() {
        assert!(harmonic_span_enclosure(5, 4, 64).is_err());
        assert!(harmonic_span_enclosure(0, 4, 64).is_err());
        assert!(matches!(
            harmonic_span_enclosure(2, 2 + DIRECT_RANGE_CAP, 64),
            Err(Error::RangeTooLarge(_))
        ));
    }

    #[test]
    fn gamma_digits() {
        // 0.57721566490153286060651209008240243104215933593992...
        let lo = ExactRational::new(
            "57721566490153286060651209008240243104215933593992"
                .parse::<BigInt>()
                .unwrap(),
            BigInt::from(10u32).pow(50),
        );
        let hi = &lo + &ExactRational::new(1, BigInt::from(10u32).pow(50));
        let g = euler_gamma(180);
        assert!(g.lo().cmp_rational(&hi).is_lt());
        assert!(g.hi().cmp_rational(&lo).is_gt());
        assert!(g.width() < Dyadic::pow2(-170));
        // Cached value serves lower requests.
        assert!(euler_gamma(64).contains_interval(&g) || euler_gamma(64) == g);
    }

    #[test]
    fn asymptotic_harmonic_numbers() {
        let h10 = harmonic_number_asymptotic(10, 64).unwrap();
        assert!(h10.contains_rational(&ExactRational::new(7381, 2520)));
        let h100 = harmonic_number_asymptotic(100, 64).unwrap();
        assert!(h100.contains_rational(&harmonic_span_exact(1, 100)));
        assert!(h100.width() < Dyadic::pow2(-60));
        assert!(harmonic_number_asymptotic(9, 64).is_err());
    }

    #[test]
    fn asymptotic_and_direct_agree_on_huge_n() {
        let n: u128 = 1_000_000_000;
        let h = harmonic_number_asymptotic(n, 128).unwrap();
        assert!(h.width() < Dyadic::pow2(-100));
        let stacked = harmonic_number_asymptotic(n - 10, 128)
            .unwrap()
            .add(&harmonic_span_enclosure(n - 9, n, 128).unwrap());
        assert!(h.overlaps(&stacked));
    }

    #[test]
    fn asymptotic_span_matches_exact_for_mid_ranges() {
        for (m, n) in [
            (2u128, 20_000u128),
            (9_000, 30_000),
            (12_000, 12_500),
            (5, 9_000),
        ] {
            let exact = harmonic_span_exact(m, n);
            for bits in [64u32, 128, 256] {
                let iv = harmonic_span_asymptotic(m, n, bits).unwrap();
                assert!(iv.contains_rational(&exact), "({m}, {n}) at {bits}");
                assert!(iv.width() <= Dyadic::pow2(-(bits as i64) + 3));
            }
        }
    }

    #[test]
    fn backend_switch() {
        let (_, b) = span_enclosure(2, 1000, 64).unwrap();
        assert_eq!(b, Backend::Interval);
        let (iv, b) = span_enclosure(1_000_000_000, 2_718_281_828, 96).unwrap();
        assert_eq!(b, Backend::Asymptotic);
        assert!((iv.midpoint().to_f64() - 1.0).abs() < 1e-9);
    }
}
