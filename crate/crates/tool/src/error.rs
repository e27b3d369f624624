use std::path::PathBuf;

/// Failures of the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {origin}: {source}")]
    Json {
        origin: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] pisot_wfa::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl ToolError {
    /// Process exit status: 1 for usage errors, 2 for contract violations
    /// and malformed input, 3 for failed verifications.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Usage(_) => 1,
            ToolError::Io { .. }
            | ToolError::Json { .. }
            | ToolError::Input(_)
            | ToolError::Core(_) => 2,
            ToolError::Verification(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, ToolError>;
