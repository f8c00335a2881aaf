//! Certified term counts.
//!
//! The predicate `P(f) := sum_{i=m}^{m+f-1} 1/i < q*r` holds for every `f`
//! below the answer and fails for every `f` above it, because the terms are
//! positive. The solver brackets the answer with the closed-form window and
//! binary-searches it, recording every comparison in the certificate.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::bounds::f_bounds_with;
use crate::error::{Error, Result};
use crate::interval::RealInterval;
use crate::rational::{harmonic_span_exact, ExactRational};
use crate::realnum::{compare_span_to_target, PrecisionPolicy};
use crate::types::{
    validate_query, Backend, BoundsWindow, Certificate, Comparison, SpanQuery, SpanResult,
    SpanValue, Verdict,
};

/// Windows whose upper end stays at or below this many terms are decided with
/// exact rational sums instead of enclosures.
pub const EXACT_MAX_TERMS: u128 = 2048;

#[derive(Debug, Clone)]
struct Evaluation {
    verdict: Verdict,
    value: SpanValue,
    precision_bits: u32,
    backend: Backend,
}

struct Search<'a> {
    query: &'a SpanQuery,
    policy: &'a PrecisionPolicy,
    exact: bool,
    memo: BTreeMap<u128, Evaluation>,
    certificate: Certificate,
}

impl Search<'_> {
    /// Evaluates `P(f)`; `true` when the `f`-term span is below the target.
    fn below(&mut self, f: u128) -> Result<bool> {
        if let Some(e) = self.memo.get(&f) {
            return Ok(e.verdict == Verdict::Less);
        }
        let m = self.query.m() as u128;
        let n = m + f - 1;
        let target = self.query.target();
        let eval = if self.exact {
            let sum = harmonic_span_exact(m, n);
            let verdict = if sum.cmp_int(&target.into()).is_lt() {
                Verdict::Less
            } else {
                Verdict::Greater
            };
            Evaluation {
                verdict,
                value: SpanValue::Exact(sum),
                precision_bits: 0,
                backend: Backend::Exact,
            }
        } else {
            let c = compare_span_to_target(m, n, target as u64, self.policy)?;
            Evaluation {
                verdict: c.verdict,
                value: SpanValue::Enclosure(c.enclosure),
                precision_bits: c.precision_bits,
                backend: c.backend,
            }
        };
        self.certificate.record(Comparison {
            n,
            verdict: eval.verdict,
            precision_bits: eval.precision_bits,
        });
        let below = eval.verdict == Verdict::Less;
        self.memo.insert(f, eval);
        Ok(below)
    }
}

fn scale_by_r(value: &SpanValue, r: u32) -> SpanValue {
    if r == 1 {
        return value.clone();
    }
    match value {
        SpanValue::Exact(v) => SpanValue::Exact(v / &ExactRational::from_int(r)),
        SpanValue::Enclosure(iv) => {
            let bits = iv.precision_bits() + 16;
            SpanValue::Enclosure(iv.div_int(&r.into(), bits))
        }
    }
}

/// Finds the unique `f` with `(1/r) Q_m^{m+f-1} < q < (1/r) Q_m^{m+f}`.
pub fn solve_f(query: &SpanQuery, policy: &PrecisionPolicy) -> Result<SpanResult> {
    let window = f_bounds_with(query, policy)?;
    solve_in_window(query, window, policy)
}

fn solve_in_window(
    query: &SpanQuery,
    window: BoundsWindow,
    policy: &PrecisionPolicy,
) -> Result<SpanResult> {
    let mut search = Search {
        query,
        policy,
        exact: window.ub < EXACT_MAX_TERMS,
        memo: BTreeMap::new(),
        certificate: Certificate::default(),
    };

    let mut erratum = Vec::new();
    let step0 = window.width().max(1);

    // P(1) is 1/m < q*r, always true, so widening down terminates.
    let mut lo = window.lb;
    let mut step = step0;
    while !search.below(lo)? {
        erratum.push(format!(
            "span of lb = {lo} terms already reaches the target"
        ));
        lo = lo.saturating_sub(step).max(1);
        step = step.saturating_mul(2);
    }
    let mut hi = window.ub + 1;
    let mut step = step0;
    while search.below(hi)? {
        erratum.push(format!(
            "span of ub + 1 = {hi} terms is still below the target"
        ));
        hi = hi.checked_add(step).ok_or_else(|| Error::MagnitudeCap {
            reason: "search bracket overflowed".into(),
        })?;
        step = step.saturating_mul(2);
    }

    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if search.below(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let f = lo;
    let below = search.memo.get(&f).cloned();
    let above = search.memo.get(&(f + 1)).cloned();
    let (below, above) = match (below, above) {
        (Some(b), Some(a)) if b.verdict == Verdict::Less && a.verdict == Verdict::Greater => (b, a),
        _ => panic!("search ended without a certified bracket at f = {f}"),
    };

    let backend = below.backend.max(above.backend);
    let erratum = if window.contains(f) {
        None
    } else {
        Some(format!(
            "f = {f} lies outside the closed-form window [{}, {}]: {}",
            window.lb,
            window.ub,
            erratum.join("; ")
        ))
    };
    Ok(SpanResult {
        query: *query,
        f,
        sum_below: scale_by_r(&below.value, query.r()),
        sum_above: scale_by_r(&above.value, query.r()),
        backend,
        window,
        certificate: search.certificate,
        erratum,
    })
}

/// Which theorem claims a result satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    /// `lb <= f <= ub`.
    pub bounds_hold: bool,
    /// `f` is one of the two midpoint candidates; `None` unless `q = r = 1`.
    pub midpoint_holds: Option<bool>,
    /// `ub - lb <= ceil(e^(q*r))`.
    pub window_width_ok: bool,
    pub details: Vec<String>,
}

impl TheoremReport {
    pub fn all_hold(&self) -> bool {
        self.bounds_hold && self.midpoint_holds.unwrap_or(true) && self.window_width_ok
    }
}

pub fn verify_theorems(query: &SpanQuery, result: &SpanResult) -> TheoremReport {
    let w = &result.window;
    let f = result.f;
    let mut details = Vec::new();

    let bounds_hold = w.contains(f);
    if !bounds_hold {
        details.push(format!("{query}: f = {f} outside [{}, {}]", w.lb, w.ub));
    }
    let midpoint_holds = (query.q() == 1 && query.r() == 1).then(|| {
        let ok = f == w.ml || f == w.mh;
        if !ok {
            details.push(format!("{query}: f = {f} is neither {} nor {}", w.ml, w.mh));
        }
        ok
    });
    let window_width_ok = w.ub - w.lb <= w.width_cap;
    if !window_width_ok {
        details.push(format!(
            "{query}: window width {} exceeds ceil(e^qr) = {}",
            w.ub - w.lb,
            w.width_cap
        ));
    }
    if let Some(e) = &result.erratum {
        details.push(e.clone());
    }
    TheoremReport {
        bounds_hold,
        midpoint_holds,
        window_width_ok,
        details,
    }
}

/// One sweep entry: the raw triple and its outcome.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub m: u64,
    pub q: u32,
    pub r: u32,
    pub outcome: Result<(SpanResult, TheoremReport)>,
}

/// Solves and checks every triple in the product of the ranges.
///
/// Records come back ordered by `(m, q, r)` regardless of `jobs`; `None` uses
/// the global thread pool.
pub fn sweep(
    m_range: RangeInclusive<u64>,
    q_range: RangeInclusive<u32>,
    r_range: RangeInclusive<u32>,
    policy: &PrecisionPolicy,
    jobs: Option<usize>,
) -> Vec<SweepRecord> {
    let mut triples = Vec::new();
    for m in m_range {
        for q in q_range.clone() {
            for r in r_range.clone() {
                triples.push((m, q, r));
            }
        }
    }
    let run = |&(m, q, r): &(u64, u32, u32)| {
        let outcome = validate_query(m as i64, q as i64, r as i64).and_then(|query| {
            let result = solve_f(&query, policy)?;
            let report = verify_theorems(&query, &result);
            Ok((result, report))
        });
        SweepRecord { m, q, r, outcome }
    };
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| triples.par_iter().map(run).collect()),
            Err(_) => triples.iter().map(run).collect(),
        },
        None => triples.par_iter().map(run).collect(),
    }
}

/// The enclosure behind a span value, for callers that want interval form.
pub fn as_interval(value: &SpanValue, bits: u32) -> RealInterval {
    match value {
        SpanValue::Exact(r) => RealInterval::from_ratio(r.numer(), r.denom(), bits),
        SpanValue::Enclosure(iv) => iv.clone(),
    }
}
