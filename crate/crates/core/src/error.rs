use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("start denominator must satisfy m > 1 (got m = {0})")]
    MDomain(i64),

    #[error("target sum must satisfy q >= 1 (got q = {0})")]
    QDomain(i64),

    #[error("step multiple must satisfy r >= 1 (got r = {0})")]
    RDomain(i64),

    #[error("magnitude cap exceeded: {reason}")]
    MagnitudeCap { reason: String },

    #[error("precision exhausted at {cap_bits} bits without resolving {what}")]
    PrecisionExhausted { cap_bits: u32, what: String },

    #[error("range too large: {0}")]
    RangeTooLarge(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("exact oracle cap of {cap} terms exceeded")]
    CapExceeded { cap: u64 },

    #[error("invalid precision policy: {0}")]
    InvalidPolicy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
