use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("modulus {0:?} is reducible over the prime field")]
    ReducibleModulus(Vec<u32>),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("field of order {0} exceeds the supported maximum of 65536")]
    FieldTooLarge(u128),
    #[error("invalid field parameters: {0}")]
    BadField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("element {value} is out of range for a field of order {q}")]
    ElementOutOfRange { value: u64, q: u32 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("weight ell = {0} must be at least 2")]
    BadEll(u32),
    #[error("ell = {ell} must satisfy 2 <= ell < q = {q}")]
    EllOutOfRange { ell: u32, q: u32 },
    #[error("k = {k} is not a positive multiple of q = {q}")]
    NotMultipleOfQ { k: u64, q: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("search space of {0} configurations exceeds the exhaustive limit")]
    SearchSpaceTooLarge(u128),
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("parameter inequality violated: {0}")]
    InequalityViolated(String),
    #[error("lower bound violated: found a set of size {size} below the bound {bound}")]
    BoundViolated { size: usize, bound: String },
    #[error("invalid document: {0}")]
    BadDocument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
