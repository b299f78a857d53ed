use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported limit of 2^20")]
    FieldTooLarge(u128),
    #[error("modulus must be a monic polynomial of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("{d} does not divide {n}")]
    NotDivisor { d: u64, n: u64 },
    #[error("{0} is not the order of a subfield")]
    BadSubfield(u64),
    #[error("coefficient {0} does not lie in the coefficient subfield")]
    CoefficientOutsideSubfield(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub type Result<T> = std::result::Result<T, Error>;
