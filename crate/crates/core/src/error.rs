use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension N = {0}: the index set needs N >= 2")]
    InvalidDimension(usize),

    #[error("working precision of {0} digits is below the minimum of 30")]
    PrecisionTooLow(u32),

    #[error("zero threshold 10^{0} is outside (0, 1)")]
    InvalidZeroThreshold(f64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} index {index} outside admissible range {lo}..={hi}")]
    IndexOutOfRange { what: &'static str, index: i64, lo: i64, hi: i64 },

    #[error("N = {0} is below the seed-formula threshold; the Gram-Schmidt construction is required")]
    FallbackRequired(usize),

    #[error("degenerate recurrence step at n = {n}: b_n ~ 10^{log10_b:.1}; increase the working precision")]
    DegenerateStep { n: usize, log10_b: f64 },

    #[error("arithmetic produced a non-finite value in {0}")]
    NonFinite(&'static str),
}
