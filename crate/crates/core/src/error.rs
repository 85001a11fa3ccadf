use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("generator index {index} outside alphabet of rank {rank}")]
    AlphabetMismatch { index: usize, rank: usize },

    #[error("the trivial word has no root")]
    TrivialRoot,

    #[error("operation requires a nontrivial word")]
    TrivialInput,

    #[error("word `{0}` is not cyclically reduced")]
    NotCyclicallyReduced(String),

    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("not a quadratic equation in standard form: {0}")]
    NotStandardForm(String),

    #[error("outside supported scope: {0}")]
    ScopeExceeded(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub fn syntax(pos: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            message: message.into(),
        }
    }

    /// Process exit code: 2 for syntax errors, 1 for every domain error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } => 2,
            _ => 1,
        }
    }
}
