use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("negative weight `{text}` at {line}:{col}")]
    NegativeWeight {
        line: usize,
        col: usize,
        text: String,
    },

    #[error("undeclared state `{0}`")]
    UnknownState(String),

    #[error("undeclared parameter `{0}`")]
    UnknownParam(String),

    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),

    #[error("valuation is missing parameter `{0}`")]
    MissingParam(String),

    #[error("negative value for parameter `{0}`")]
    NegativeValue(String),

    #[error("operation requires a concrete model, found parameter `{0}`")]
    Parametric(String),

    #[error("0-cycle present: {}", .cycle.join(" -> "))]
    ZeroCycle { cycle: Vec<String> },

    #[error("not strongly cost non-zeno: {}", .cycle.join(" -> "))]
    NotNonZeno { cycle: Vec<String> },

    #[error("formula error at column {col}: {msg}")]
    Formula { col: usize, msg: String },

    #[error("expression error: {0}")]
    Expr(String),

    #[error("empty valuation grid")]
    EmptyGrid,
}

impl Error {
    /// Errors that reject a well-formed input because it falls outside the
    /// domain where the algorithms terminate (as opposed to malformed input).
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::ZeroCycle { .. } | Error::NotNonZeno { .. } | Error::Parametric(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
