use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{what} needs {needed} iterations, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("prime contexts differ: {0} and {1}")]
    ContextMismatch(u64, u64),

    #[error("coefficient not covered by source: {0}")]
    Coverage(String),

    #[error("oracle value is not rational: {0}")]
    NotRational(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default brute-force budget shared by every enumeration.
pub const DEFAULT_CAP: u128 = 100_000_000;

pub(crate) fn check_cap(what: &'static str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::CapExceeded { what, needed, cap })
    } else {
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`, for cap checks.
pub(crate) fn sat_pow(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
