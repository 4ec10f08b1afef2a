use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("F_{p}^{e} exceeds the supported field size")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("no built-in modulus for F_{p}^{e}; supply one")]
    NoTableModulus { p: u32, e: u32 },
    #[error("elements from field contexts {left} and {right} cannot be combined")]
    ContextMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("table bound too small: need index {need}, have {have}")]
    TableTooShort { need: usize, have: usize },
    #[error("series truncated at order {order} cannot supply index {need}")]
    SeriesTooShort { order: usize, need: usize },
    #[error("operation requires a polynomial series")]
    NotPolynomial,
    #[error("basis is linearly dependent over F_{0}")]
    DependentBasis(u64),
    #[error("enumeration of {0} polynomials exceeds the brute-force guard")]
    GuardExceeded(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
