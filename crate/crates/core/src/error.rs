use thiserror::Error;

/// Errors raised by the algebra and code-construction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {p}^(2*{h}) exceeds the 2^32 enumeration guard")]
    FieldTooLarge { p: u64, h: u32 },
    #[error("encoding {enc} is out of range for a field of order {order}")]
    EncodingOutOfRange { enc: u64, order: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("extension degree h={0} is odd; the hermitian conjugation needs h even")]
    OddDegree(u32),
    #[error("operands belong to different fields or ambient spaces")]
    Mismatch,
    #[error("row has length {got}, expected {expected}")]
    RowLength { expected: usize, got: usize },
    #[error("entry {0} does not lie in the base field")]
    NotInBaseField(u32),
    #[error("multiplier vector has a zero entry at coordinate {0}")]
    ZeroMultiplier(usize),
    #[error("enumeration needs {needed} steps, cap is {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("generator polynomial check failed: {0}")]
    BadGenerator(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
