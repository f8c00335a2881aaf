use num_bigint::BigInt;
use num_traits::One;

use crate::interval::{Dyadic, RealInterval, Rounding};

const GUARD_BITS: u32 = 16;

/// Encloses `e^x` for a non-negative integer `x`.
///
/// The result is rounded onto a grid of `bits` significant bits and padded by
/// one grid step, so its width stays below `2^(ceil(x*log2(e)) - bits + 2)`.
pub fn exp_enclosure(x: u32, bits: u32) -> RealInterval {
    if x == 0 {
        return RealInterval::from_int(1, bits);
    }
    let core = exp_core(x, bits + GUARD_BITS);
    let lead = core.lo().ilog2().unwrap_or(0);
    core.pad_to_grid(lead - bits as i64).with_precision(bits)
}

// Taylor series summed exactly as an integer: S = sum_{k<=N} x^k N!/k!, so
// e^x lies in [S/N!, S/N! + 2x^(N+1)/(N+1)!] once N+2 >= 2x.
fn exp_core(x: u32, work_bits: u32) -> RealInterval {
    let log2x = (x as f64).log2();
    let mut n = 2 * x as u64;
    // log2((n+1)!) accumulated in f64; a few bits of slack absorb its error.
    let mut log2_fact: f64 = (1..=n + 1).map(|k| (k as f64).log2()).sum();
    while log2_fact - (n + 1) as f64 * log2x < work_bits as f64 + 8.0 {
        n += 1;
        log2_fact += ((n + 1) as f64).log2();
    }

    let xb = BigInt::from(x);
    let mut acc = BigInt::one();
    let mut fact = BigInt::one();
    let mut xpow = BigInt::one();
    for j in 1..=n {
        xpow *= &xb;
        acc = acc * j + &xpow;
        fact *= j;
    }
    let lo = Dyadic::from_ratio(&acc, &fact, work_bits, Rounding::Down);
    let tail_num = &acc * (n + 1) + (xpow * &xb) * 2u32;
    let hi = Dyadic::from_ratio(&tail_num, &(fact * (n + 1)), work_bits, Rounding::Up);
    RealInterval::new(lo, hi, work_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ExactRational;

    fn approx(iv: &RealInterval) -> f64 {
        iv.midpoint().to_f64()
    }

    #[test]
    fn known_values() {
        let e = exp_enclosure(1, 53);
        // 2.718281828459045235360287...
        let lo = ExactRational::new(2718281828459045u64, 1_000_000_000_000_000u64);
        let hi = ExactRational::new(2718281828459046u64, 1_000_000_000_000_000u64);
        assert!(e.lo().cmp_rational(&hi).is_lt() && e.hi().cmp_rational(&lo).is_gt());
        assert!((approx(&exp_enclosure(10, 64)) - 22026.465794806718).abs() < 1e-9);
        assert!((approx(&exp_enclosure(6, 64)) - 403.4287934927351).abs() < 1e-10);
        assert_eq!(exp_enclosure(0, 64).lo(), &Dyadic::from_int(1));
    }

    #[test]
    fn e_digits_at_high_precision() {
        // 50 decimals of e.
        let digits = "271828182845904523536028747135266249775724709369995";
        let lo = ExactRational::new(
            digits.parse::<BigInt>().unwrap(),
            BigInt::from(10u32).pow(50),
        );
        let hi = &lo + &ExactRational::new(1, BigInt::from(10u32).pow(50));
        let e = exp_enclosure(1, 200);
        assert!(e.lo().cmp_rational(&hi).is_lt());
        assert!(e.hi().cmp_rational(&lo).is_gt());
        assert!(e.width() < Dyadic::pow2(-190));
    }

    #[test]
    fn width_bound_holds() {
        for x in [1u32, 2, 5, 9, 10, 33, 64] {
            for bits in [32u32, 53, 96, 200, 500] {
                let iv = exp_enclosure(x, bits);
                let ceil_log = (x as f64 * std::f64::consts::LOG2_E).ceil() as i64;
                assert!(
                    iv.width() <= Dyadic::pow2(ceil_log - bits as i64 + 2),
                    "x={x} bits={bits}"
                );
            }
        }
    }

    #[test]
    fn refinement_nests() {
        for x in [1u32, 3, 9, 64] {
            let mut prev = exp_enclosure(x, 40);
            for bits in [80u32, 160, 320, 640] {
                let next = exp_enclosure(x, bits);
                assert!(prev.contains_interval(&next), "x={x} bits={bits}");
                prev = next;
            }
        }
    }

    #[test]
    fn powers_agree() {
        // e^3 * e^6 must overlap e^9.
        let a = exp_enclosure(3, 120).mul(&exp_enclosure(6, 120));
        assert!(a.overlaps(&exp_enclosure(9, 120)));
    }
}
