use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate parameter: r = {r} makes d = 1 - r^2 vanish")]
    DegenerateParameter { r: String },
    #[error("Q = {q_big} < 2 gives complex a, which is not supported")]
    SubcriticalQ { q_big: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("division by a scalar below the pivot threshold")]
    DivisionByNearZero,
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("construction identity `{id}` failed: residual {residual} > tolerance {tolerance}")]
    ConstructionIdentityFailure { id: String, residual: String, tolerance: String },
    #[error("singular metric: pivot below threshold")]
    SingularMetric,
    #[error("rank deficiency: {0}")]
    RankDeficiency(String),
    #[error("degree {degree} exceeds the engine bound {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("unknown generator {0}")]
    UnknownGenerator(u8),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
