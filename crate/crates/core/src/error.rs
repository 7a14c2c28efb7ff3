use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("even characteristic unsupported (q = {0})")]
    EvenCharacteristic(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {q} exceeds the supported maximum {max}")]
    FieldTooLarge { q: u64, max: u64 },
    #[error("field order must be at least 3, got {0}")]
    FieldTooSmall(u64),
    #[error("modulus {0:?} is not a monic irreducible polynomial of the required degree")]
    BadModulus(Vec<u32>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element code {code} out of range for F_{q}")]
    ElementOutOfRange { code: u32, q: u32 },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("duplicate point {0:?} in point set")]
    DuplicatePoint(Vec<u32>),
    #[error("degenerate bisector: the two points coincide")]
    DegenerateBisector,
    #[error("dilation ratio must be nonzero")]
    ZeroRatio,
    #[error("enumeration budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("{0}")]
    Hypothesis(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error("invalid pattern graph: {0}")]
    InvalidPattern(String),
    #[error("requested {requested} points but the space only has {available}")]
    SizeTooLarge { requested: u128, available: u128 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
