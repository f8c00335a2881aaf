use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::interval::{Dyadic, RealInterval};

/// Encloses `ln(num/den)` for integers `num > den >= 1`.
///
/// The result sits on the grid `2^-bits`, padded by one grid step.
pub fn ln_enclosure(num: u128, den: u128, bits: u32) -> Result<RealInterval> {
    if den == 0 || num <= den {
        return Err(Error::Domain(format!(
            "ln({num}/{den}) requires num > den >= 1"
        )));
    }
    let work = bits + 16 + (32 - bits.leading_zeros());
    let (lo, hi) = ln_fixed(&BigInt::from(num), &BigInt::from(den), work);
    let core = RealInterval::new(
        Dyadic::new(lo, -(work as i64)),
        Dyadic::new(hi, -(work as i64)),
        work,
    );
    Ok(core.pad_to_grid(-(bits as i64)).with_precision(bits))
}

// Bounds on 2^w * ln(num/den) as integers, via ln = k*ln2 + 2*atanh(z).
fn ln_fixed(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, BigInt) {
    let mut k = num.bits() as i64 - den.bits() as i64;
    if (den << k.max(0) as u64) > *num {
        k -= 1;
    }
    let scaled_den = den << k as u64;
    let p = num - &scaled_den;
    let q = num + &scaled_den;
    let (z_lo, z_hi) = atanh_fixed(&p, &q, w);
    let (l2_lo, l2_hi) = atanh_fixed(&BigInt::from(1), &BigInt::from(3), w);
    let k = BigInt::from(k);
    let lo = (&k * l2_lo + z_lo) * 2u32;
    let hi = (&k * l2_hi + z_hi) * 2u32;
    (lo, hi)
}

// Bounds on 2^w * atanh(p/q) for 0 <= p/q <= 1/3.
fn atanh_fixed(p: &BigInt, q: &BigInt, w: u32) -> (BigInt, BigInt) {
    if p.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let p2 = p * p;
    let q2 = q * q;
    let scale = BigInt::one() << w as u64;

    // Lower: every truncation rounds down, so each partial term underestimates.
    let mut lo = BigInt::zero();
    let mut pow = (&scale * p).div_floor(q);
    let mut odd = 1u64;
    while !pow.is_zero() {
        lo += pow.div_floor(&BigInt::from(odd));
        pow = (&pow * &p2).div_floor(&q2);
        odd += 2;
    }

    // Upper: round up, then bound the geometric tail once the power drops to one unit.
    let mut hi = BigInt::zero();
    let mut pow = ceil_div(&(&scale * p), q);
    let mut odd = 1u64;
    loop {
        if pow <= BigInt::one() {
            let tail_den = (&q2 - &p2) * odd;
            hi += ceil_div(&(&pow * &q2), &tail_den);
            break;
        }
        hi += ceil_div(&pow, &BigInt::from(odd));
        pow = ceil_div(&(&pow * &p2), &q2);
        odd += 2;
    }
    (lo, hi)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}
