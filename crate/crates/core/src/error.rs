use thiserror::Error;

/// Errors raised by ring, form, algebra, Picard and glueing operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed ring descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("structure constants are not associative at basis triple ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("structure constants are not commutative at basis pair ({0}, {1})")]
    NonCommutative(usize, usize),
    #[error("structure constants admit no identity element")]
    NoIdentity,
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("operation requires 2 to be a non-zero-divisor")]
    NotTwoRegular,
    #[error("operation is not supported for this ring: {0}")]
    UnsupportedRing(String),
    #[error("ring is infinite")]
    InfiniteRing,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("matrix determinant is not a unit")]
    SingularMatrix,
    #[error("form is not definite (discriminant must be negative)")]
    NotDefinite,
    #[error("forms have different discriminants")]
    DiscriminantMismatch,
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(String),
    #[error("(delta, parity) is not a valid triple")]
    InvalidTriple,
    #[error("element does not lift the given parity")]
    BadLift,
    #[error("parity lift mismatch: lift must be congruent to r mod 2")]
    ParityMismatch,
    #[error("parity lift must be 0 or 1 and congruent to delta mod 2")]
    BadParityLift,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("form type does not match the order")]
    TypeMismatch,
    #[error("form is not primitive")]
    NotPrimitive,
    #[error("ideal is not invertible")]
    NotInvertible,
    #[error("ideals belong to different orders")]
    OrderMismatch,
    #[error("lattice is not an ideal of the order")]
    NotAnIdeal,
    #[error("continued fraction period exceeds {0} steps")]
    PeriodCapExceeded(u64),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
