use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    BadPrime(i64),
    #[error("division by zero in F_p")]
    DivisionByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("invalid specification: {0}")]
    Spec(String),
    #[error("root {0} is not in the support of u^a")]
    RootOutside(String),
    #[error("element is not unipotent")]
    NotUnipotent,
    #[error("orbit size cap {cap} exceeded after {seen} elements")]
    OrbitCap { cap: usize, seen: usize },
    #[error("group order cap {cap} exceeded")]
    GroupCap { cap: usize },
    #[error("claim failed: {0}")]
    Claim(String),
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
