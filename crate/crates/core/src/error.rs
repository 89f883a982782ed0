use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("photon totals differ: input has {input}, output has {output}")]
    TotalMismatch { input: u64, output: u64 },

    /// Work would exceed the configured size guard of an algorithm.
    #[error("{algorithm} guard exceeded: {detail}")]
    Guard {
        algorithm: &'static str,
        detail: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(
        "thermal cutoff {cutoff} leaves residual mass {residual:e} above tolerance {tolerance:e}"
    )]
    InsufficientCutoff {
        cutoff: u32,
        residual: f64,
        tolerance: f64,
    },
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            Error::Dimension(_)
            | Error::TotalMismatch { .. }
            | Error::Invalid(_)
            | Error::InsufficientCutoff { .. } => 3,
            Error::Guard { .. } => 4,
        }
    }

    /// Short machine-readable tag for error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Dimension(_) => "dimension",
            Error::TotalMismatch { .. } => "total_mismatch",
            Error::Guard { .. } => "guard",
            Error::Invalid(_) => "invalid",
            Error::InsufficientCutoff { .. } => "insufficient_cutoff",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
