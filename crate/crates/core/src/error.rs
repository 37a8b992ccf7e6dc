use thiserror::Error;

/// Errors raised by construction, querying and (de)serialization.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} {value} out of range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },

    #[error("symbol {symbol} outside alphabet [1, {sigma}]")]
    InvalidSymbol { symbol: usize, sigma: usize },

    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: usize, hi: usize },

    #[error("ordinals start at 1")]
    ZeroOrdinal,

    #[error("unknown operation `{0}`")]
    UnknownOp(String),

    #[error("operation `{op}` takes {expected} arguments, got {got}")]
    Arity {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("no reduction path reaches `{0}` from the native operation set")]
    Unreachable(&'static str),

    #[error("pair ({label}, {object}) outside [1, {sigma}] x [1, {n}]")]
    PairOutOfBounds {
        label: usize,
        object: usize,
        sigma: usize,
        n: usize,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(what: &'static str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if value < lo || value > hi {
        Err(Error::OutOfRange { what, value, lo, hi })
    } else {
        Ok(())
    }
}
