use thiserror::Error;

/// Errors shared across the crate. Precision failures are loud by design:
/// a symbol computed from data outside the stored window would be wrong,
/// not merely imprecise.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AdelixError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("factors are not coprime mod p")]
    NotCoprime,
    #[error("reduction mod p is not squarefree (ramified branch): {0}")]
    NotSquarefreeModP(String),
    #[error("matrix does not have determinant 1: {0}")]
    NotDetOne(String),
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("cohomology window did not stabilize (doubling limit hit at width {0})")]
    WindowUnstable(i64),
    #[error("divisor supports share a component: {0}")]
    SharedComponent(String),
    #[error("group algebra does not split over Q: {0}")]
    DoesNotSplit(String),
    #[error("ring descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, AdelixError>;
