use thiserror::Error;

#[derive(Debug, Error)]
pub enum FuzzyError {
    #[error("malformed segment list: {0}")]
    Structural(String),
    #[error("not a fuzzy number: {0}")]
    Invalid(String),
    #[error("level {0} is outside [0, 1]")]
    LevelOutOfRange(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("refused: {0}")]
    Refused(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FuzzyError {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            FuzzyError::Structural(_) => "structural",
            FuzzyError::Invalid(_) => "invalid",
            FuzzyError::LevelOutOfRange(_) => "level-range",
            FuzzyError::Precondition(_) => "precondition",
            FuzzyError::Parse { .. } => "parse",
            FuzzyError::Refused(_) => "refused",
            FuzzyError::Io(_) => "io",
        }
    }
}

pub type Result<T, E = FuzzyError> = std::result::Result<T, E>;
