use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("genome length must be at least 1")]
    EmptyGenome,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),
    #[error("position pair ({i}, {j}) out of range for n = {n}")]
    PositionOutOfRange { i: usize, j: usize, n: usize },
    #[error("rank {rank} out of range for n = {n} (|B_n| = {size})")]
    RankOutOfRange { rank: u64, n: usize, size: u64 },
    #[error("n = {n} exceeds the limit of {limit} for {what}")]
    TooLarge {
        n: usize,
        limit: usize,
        what: &'static str,
    },
    #[error("edge probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("exploration examined more than {0} edges")]
    EdgeBudgetExceeded(u64),
    #[error("malformed edge file: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
