//! Adaptive-precision certified real arithmetic.
//!
//! Every function here returns an enclosure: the true real value lies inside
//! the returned interval, with each dyadic step rounded outward.

mod compare;
mod exp;
mod harmonic;
mod ln;

pub use compare::{certified_floor, compare_span_to_target, SpanComparison};
pub use exp::exp_enclosure;
pub use harmonic::{
    bernoulli, euler_gamma, harmonic_number_asymptotic, harmonic_span_asymptotic,
    harmonic_span_enclosure, span_enclosure, ASYMPTOTIC_SPLIT, DIRECT_MAX_TERMS, DIRECT_RANGE_CAP,
};
pub use ln::ln_enclosure;

use crate::error::{Error, Result};

/// Environment variable that overrides the precision cap in the CLI.
pub const PRECISION_CAP_ENV: &str = "HSPAN_PRECISION_CAP_BITS";

/// Start, growth and cap of the precision schedule. Precision doubles each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    start_bits: u32,
    cap_bits: u32,
}

impl PrecisionPolicy {
    pub const DEFAULT_START_BITS: u32 = 96;
    pub const DEFAULT_CAP_BITS: u32 = 65536;

    pub fn new(start_bits: u32, cap_bits: u32) -> Result<Self> {
        if start_bits < 32 {
            return Err(Error::InvalidPolicy(format!(
                "start_bits must be at least 32 (got {start_bits})"
            )));
        }
        if cap_bits < start_bits {
            return Err(Error::InvalidPolicy(format!(
                "cap_bits ({cap_bits}) is below start_bits ({start_bits})"
            )));
        }
        Ok(Self {
            start_bits,
            cap_bits,
        })
    }

    pub fn start_bits(&self) -> u32 {
        self.start_bits
    }

    pub fn cap_bits(&self) -> u32 {
        self.cap_bits
    }

    /// The precision schedule: start, 2*start, ... up to and including the cap.
    pub fn schedule(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap_bits;
        let mut next = Some(self.start_bits);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= cap {
                None
            } else {
                Some(cur.saturating_mul(2).min(cap))
            };
            Some(cur)
        })
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            start_bits: Self::DEFAULT_START_BITS,
            cap_bits: Self::DEFAULT_CAP_BITS,
        }
    }
}
