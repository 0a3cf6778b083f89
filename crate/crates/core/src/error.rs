use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {p}^{e} exceeds 2^16")]
    TooLarge { p: u64, e: u32 },
    #[error("no irreducible polynomial of degree {e} found over GF({p})")]
    NoIrreducibleFound { p: u32, e: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("zero vector has no projective representative")]
    ZeroVector,
    #[error("basis has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("budget exceeded for {what}: needs {needed}, budget {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid index set J: {0}")]
    InvalidJ(String),
    #[error("table {requested} does not match J (2n+1 {membership} J)")]
    TableMismatch { requested: u8, membership: &'static str },
    #[error("construction requires odd characteristic")]
    EvenCharacteristic,
    #[error("cap family has not been truncated")]
    NotTruncated,
    #[error("matrix is not Hadamard")]
    NotHadamard,
    #[error("wedge coefficient {value} for index set {set:?} is not a sign")]
    NotASign { value: i64, set: Vec<usize> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn budget(what: &'static str, needed: u128, budget: u128) -> Self {
        Error::BudgetExceeded { what, needed, budget }
    }
}
