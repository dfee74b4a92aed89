use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("all amplitudes are zero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("{what} is too large: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("gate {0} cannot be expressed in OpenQASM 2.0; use the JSON format")]
    UnloweredGate(String),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("tree has no full-depth path of nonzero amplitude")]
    NoValidPath,
    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("subtree rooted at level {level}, position {pos} is dead")]
    DeadSubtree { level: usize, pos: usize },
    #[error("nodes lie on different levels ({0} and {1})")]
    LevelMismatch(usize, usize),
    #[error("1 - |kappa| = {deficit} exceeds tolerance {tolerance}")]
    ToleranceExceeded { deficit: f64, tolerance: f64 },
    #[error("subtrees are not adjacent branches of a common node")]
    NotAdjacent,
    #[error("no start reached the residual tolerance (best residual {best_residual:e})")]
    ConvergenceFailure { best_residual: f64 },
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error stream.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZeroVector",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::TooLarge { .. } => "TooLarge",
            Error::UnloweredGate(_) => "UnloweredGate",
            Error::NotNormalized(_) => "NotNormalized",
            Error::NoValidPath => "NoValidPath",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DeadSubtree { .. } => "DeadSubtree",
            Error::LevelMismatch(..) => "LevelMismatch",
            Error::ToleranceExceeded { .. } => "ToleranceExceeded",
            Error::NotAdjacent => "NotAdjacent",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::InvalidGate(_) => "InvalidGate",
            Error::Parse(_) => "Parse",
        }
    }
}
