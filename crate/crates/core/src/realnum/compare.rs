use std::cmp::Ordering;

use num_bigint::BigInt;

use super::harmonic::span_enclosure;
use super::PrecisionPolicy;
use crate::error::{Error, Result};
use crate::interval::RealInterval;
use crate::types::{Backend, Verdict};

/// Outcome of comparing a harmonic span against an integer target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanComparison {
    pub verdict: Verdict,
    pub precision_bits: u32,
    /// The enclosure that decided the verdict.
    pub enclosure: RealInterval,
    pub backend: Backend,
}

/// Decides `sum_{i=m}^{n} 1/i < target` or `> target`, refining precision
/// until the enclosure excludes the target.
///
/// A harmonic span over `2 <= m <= n` is never an integer, so a tie cannot
/// occur; reaching the precision cap is reported as an error.
pub fn compare_span_to_target(
    m: u128,
    n: u128,
    target: u64,
    policy: &PrecisionPolicy,
) -> Result<SpanComparison> {
    if m < 2 || n < m {
        return Err(Error::Domain(format!(
            "comparison needs 2 <= m <= n (got m = {m}, n = {n})"
        )));
    }
    if target == 0 {
        return Err(Error::Domain("comparison target must be at least 1".into()));
    }
    let target_int = BigInt::from(target);
    for bits in policy.schedule() {
        let (enclosure, backend) = span_enclosure(m, n, bits)?;
        let verdict = match enclosure.cmp_int(&target_int) {
            Some(Ordering::Less) => Verdict::Less,
            Some(Ordering::Greater) => Verdict::Greater,
            _ => continue,
        };
        return Ok(SpanComparison {
            verdict,
            precision_bits: bits,
            enclosure,
            backend,
        });
    }
    Err(Error::PrecisionExhausted {
        cap_bits: policy.cap_bits(),
        what: format!("sum_{{i={m}}}^{{{n}}} 1/i against {target}"),
    })
}

/// Certified floor of a real given by a refinable enclosure.
///
/// `enclose(bits)` must return an enclosure whose width shrinks as `bits`
/// grows. Returns `k` and the precision at which some enclosure first fell
/// strictly inside `(k, k + 1)`.
pub fn certified_floor<F>(mut enclose: F, policy: &PrecisionPolicy) -> Result<(BigInt, u32)>
where
    F: FnMut(u32) -> RealInterval,
{
    for bits in policy.schedule() {
        if let Some(k) = enclose(bits).strict_floor() {
            return Ok((k, bits));
        }
    }
    Err(Error::PrecisionExhausted {
        cap_bits: policy.cap_bits(),
        what: "certified floor".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Dyadic;
    use crate::rational::{harmonic_span_exact, ExactRational};
    use crate::realnum::exp_enclosure;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn worked_inequalities() {
        let c = compare_span_to_target(5, 11, 1, &policy()).unwrap();
        assert_eq!(c.verdict, Verdict::Less);
        assert_eq!(c.precision_bits, 96);
        assert_eq!(
            compare_span_to_target(5, 12, 1, &policy()).unwrap().verdict,
            Verdict::Greater
        );
        assert_eq!(
            compare_span_to_target(2, 3, 1, &policy()).unwrap().verdict,
            Verdict::Less
        );
    }

    #[test]
    fn agrees_with_exact_comparison() {
        for m in 2u128..40 {
            for n in m..m + 120 {
                let exact = harmonic_span_exact(m, n).cmp_int(&BigInt::from(1));
                let got = compare_span_to_target(m, n, 1, &policy()).unwrap().verdict;
                let want = if exact == Ordering::Less {
                    Verdict::Less
                } else {
                    Verdict::Greater
                };
                assert_eq!(got, want, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(compare_span_to_target(1, 5, 1, &policy()).is_err());
        assert!(compare_span_to_target(5, 4, 1, &policy()).is_err());
        assert!(compare_span_to_target(5, 6, 0, &policy()).is_err());
    }

    #[test]
    fn exhausted_policy_is_an_error() {
        let p = PrecisionPolicy::new(32, 32).unwrap();
        let err = certified_floor(|_| RealInterval::from_int(3, 32), &p).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted { .. }));
    }

    fn floor_scaled_exp(num: i64, den: i64, x: u32) -> BigInt {
        let c = ExactRational::new(num, den);
        certified_floor(
            |bits| {
                exp_enclosure(x, bits + 8)
                    .mul(&RealInterval::from_ratio(c.numer(), c.denom(), bits + 8))
                    .round_outward(bits + 8)
            },
            &policy(),
        )
        .unwrap()
        .0
    }

    #[test]
    fn table_floors() {
        // 5(e-1) and 100000(e-1) as floor(m e) - m.
        assert_eq!(floor_scaled_exp(5, 1, 1) - 5, BigInt::from(8));
        assert_eq!(
            floor_scaled_exp(100_000, 1, 1) - 100_000,
            BigInt::from(171_828)
        );
        // 3(e^9 - 1) - e^9/2 = (5/2) e^9 - 3
        assert_eq!(floor_scaled_exp(5, 2, 9) - 3, BigInt::from(20_254));
    }

    #[test]
    fn floor_is_stable_under_doubling() {
        for start in [32u32, 64, 128] {
            let p = PrecisionPolicy::new(start, 4096).unwrap();
            let (k, _) = certified_floor(|bits| exp_enclosure(5, bits), &p).unwrap();
            assert_eq!(k, BigInt::from(148));
        }
        let narrow = exp_enclosure(5, 256);
        assert!(narrow.width() < Dyadic::pow2(-240));
    }
}
