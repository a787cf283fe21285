use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not monic of degree {expected}")]
    BadModulus { expected: usize },
    #[error("modulus is reducible")]
    ReducibleModulus,
    #[error("element packing limit exceeded for GF({p}^{k})")]
    FieldTooLarge { p: u64, k: usize },
    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("linear system shapes are inconsistent")]
    ShapeMismatch,
    #[error("{0} is not a power of the field characteristic")]
    BadSubfieldOrder(u128),
    #[error("field of order {field} is not an extension of the subfield of order {sub}")]
    NotAnExtension { field: u128, sub: u128 },
    #[error("function has a pole at the evaluation place")]
    PoleAtPlace,
    #[error("zero function has no pole order")]
    ZeroFunction,
    #[error("folding width {m_prime} does not divide automorphism order {m}")]
    FoldingMismatch { m_prime: usize, m: usize },
    #[error("encountered a place with orbit shorter than the automorphism order")]
    ShortOrbit,
    #[error("no place of degree {eta} carries the automorphism as Frobenius")]
    NoFrobeniusPlace { eta: usize },
    #[error("ramified place cannot be used here")]
    RamifiedPlace,
    #[error("code parameter violation: {0}")]
    BadCodeParams(String),
    #[error("word shape does not match the code")]
    WordShapeMismatch,
    #[error("error count {e} out of range 0..={max}")]
    ErrorCountOutOfRange { e: usize, max: usize },
    #[error("no feasible multiplicity parameter below the cap")]
    ParamsOutOfRange,
    #[error("interpolation produced an empty nullspace")]
    EmptyNullspace,
    #[error("exhausted candidate Frobenius places at degree {eta}")]
    ExhaustedPlaces { eta: usize },
    #[error("lift tree exceeded the node budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
