use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QhaError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("coordinate arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("coordinate {value} out of range for cyclic factor of order {order}")]
    CoordinateOutOfRange { value: usize, order: usize },

    #[error("group is not 2-regular (some cyclic order is even)")]
    NotTwoRegular,

    #[error("invalid phase cochain: {0}")]
    InvalidCochain(String),

    #[error("multiplier is not a Heisenberg multiplier: {0}")]
    InvalidMultiplier(String),

    #[error("size guard exceeded: {what} = {size} > {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("phase-space mismatch: {0}")]
    PhaseSpaceMismatch(String),

    #[error("invalid exponent p = {0} (need p >= 1)")]
    InvalidExponent(f64),

    #[error("operation requires a nonzero operator")]
    ZeroOperator,

    #[error("operator family is empty")]
    EmptyFamily,

    #[error("unsupported multiplier kind for this operation: {0}")]
    UnsupportedMultiplier(String),

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QhaError>;
