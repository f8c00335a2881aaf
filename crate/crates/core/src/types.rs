//! Domain types shared by every module.

use std::fmt;

use crate::error::{Error, Result};
use crate::interval::RealInterval;
use crate::rational::ExactRational;

/// Default ceiling on the product `q * r`.
pub const DEFAULT_QR_CAP: u32 = 64;

// Every term count and denominator must stay far inside u128.
const MAX_LOG2_SPAN: f64 = 124.0;

/// A validated `(m, q, r)` triple: start at `1/(r*m)` and count consecutive
/// terms `1/(r*i)` whose sum stays strictly below `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanQuery {
    m: u64,
    q: u32,
    r: u32,
}

impl SpanQuery {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// The integer the unscaled span `sum 1/i` is compared against.
    pub fn target(&self) -> u32 {
        self.q * self.r
    }
}

impl fmt::Display for SpanQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, q={}, r={})", self.m, self.q, self.r)
    }
}

/// Validates raw integers against the query domain with the default cap.
pub fn validate_query(m: i64, q: i64, r: i64) -> Result<SpanQuery> {
    validate_query_with_cap(m, q, r, DEFAULT_QR_CAP)
}

pub fn validate_query_with_cap(m: i64, q: i64, r: i64, qr_cap: u32) -> Result<SpanQuery> {
    if m < 2 {
        return Err(Error::MDomain(m));
    }
    if q < 1 {
        return Err(Error::QDomain(q));
    }
    if r < 1 {
        return Err(Error::RDomain(r));
    }
    let qr = (q as i128) * (r as i128);
    if qr > qr_cap as i128 {
        return Err(Error::MagnitudeCap {
            reason: format!("q*r = {qr} exceeds the cap of {qr_cap}"),
        });
    }
    let qr = qr as u32;
    let log2_span = (m as f64).log2() + qr as f64 * std::f64::consts::LOG2_E;
    if log2_span > MAX_LOG2_SPAN {
        return Err(Error::MagnitudeCap {
            reason: format!("m*e^(q*r) needs about 2^{log2_span:.1}, above 2^{MAX_LOG2_SPAN}"),
        });
    }
    Ok(SpanQuery {
        m: m as u64,
        q: q as u32,
        r: r as u32,
    })
}

/// The closed-form integers bracketing the term count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsWindow {
    pub lb: u128,
    pub ml: u128,
    pub mh: u128,
    pub ub: u128,
    /// ceil(e^(q*r)).
    pub width_cap: u128,
    /// Highest precision any certified floor needed.
    pub precision_bits: u32,
}

impl BoundsWindow {
    pub fn contains(&self, f: u128) -> bool {
        self.lb <= f && f <= self.ub
    }

    pub fn width(&self) -> u128 {
        self.ub - self.lb
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Less,
    Greater,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Less => f.write_str("Less"),
            Verdict::Greater => f.write_str("Greater"),
        }
    }
}

/// Which evaluator produced a span value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    /// Exact rational arithmetic.
    Exact,
    /// Direct outward-rounded summation.
    Interval,
    /// Euler-Maclaurin expansion of harmonic numbers.
    Asymptotic,
}

impl Backend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Interval => "interval",
            Backend::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One recorded comparison of `sum_{i=m}^{n} 1/i` against `q*r`.
///
/// `precision_bits == 0` marks an exact rational comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub n: u128,
    pub verdict: Verdict,
    pub precision_bits: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    pub comparisons: Vec<Comparison>,
    pub final_precision_bits: u32,
}

impl Certificate {
    pub fn record(&mut self, c: Comparison) {
        self.final_precision_bits = self.final_precision_bits.max(c.precision_bits);
        self.comparisons.push(c);
    }

    pub fn verdict_at(&self, n: u128) -> Option<Verdict> {
        self.comparisons
            .iter()
            .rev()
            .find(|c| c.n == n)
            .map(|c| c.verdict)
    }
}

/// A span value, either exact or enclosed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanValue {
    Exact(ExactRational),
    Enclosure(RealInterval),
}

impl SpanValue {
    /// Decimal rendering with `sig` significant digits (midpoint for enclosures).
    pub fn to_sig_decimal(&self, sig: usize) -> String {
        match self {
            SpanValue::Exact(r) => r.to_sig_decimal(sig),
            SpanValue::Enclosure(iv) => iv.midpoint().to_sig_decimal(sig),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SpanValue::Exact(_))
    }

    /// True when the value is certainly below `q`.
    pub fn certainly_below(&self, q: u32) -> bool {
        let q = ExactRational::from_int(q);
        match self {
            SpanValue::Exact(r) => r < &q,
            SpanValue::Enclosure(iv) => iv.hi().cmp_rational(&q).is_lt(),
        }
    }

    /// True when the value is certainly above `q`.
    pub fn certainly_above(&self, q: u32) -> bool {
        let q = ExactRational::from_int(q);
        match self {
            SpanValue::Exact(r) => r > &q,
            SpanValue::Enclosure(iv) => iv.lo().cmp_rational(&q).is_gt(),
        }
    }
}

/// The certified term count for a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanResult {
    pub query: SpanQuery,
    pub f: u128,
    /// `(1/r) * sum_{i=m}^{m+f-1} 1/i`.
    pub sum_below: SpanValue,
    /// `(1/r) * sum_{i=m}^{m+f} 1/i`.
    pub sum_above: SpanValue,
    pub backend: Backend,
    pub window: BoundsWindow,
    pub certificate: Certificate,
    /// Set when `f` fell outside the closed-form window and the search had to widen.
    pub erratum: Option<String>,
}
