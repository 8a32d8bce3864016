use thiserror::Error;

/// Errors raised by the engine. The CLI maps each family onto an exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data: bad labels, unknown names, schema violations.
    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown builtin '{0}'")]
    UnknownBuiltin(String),

    /// A structure failed one of its validators.
    #[error("validation failed for {object}: {detail}")]
    Validation { object: String, detail: String },

    /// Infinitely many family instances match along a cycle of δ-paths.
    #[error("nontermination: {0}")]
    Nontermination(String),

    /// Input outside the supported class (fragments, τ ≠ 0, non-reduced complexes).
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    /// An internal consistency check failed; signals a bug or a bad structure table.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(object: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Validation {
            object: object.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
