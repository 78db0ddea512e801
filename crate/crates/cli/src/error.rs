use thiserror::Error;

/// Failures of a CLI invocation, each mapped to a documented exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// An input failed its validator.
    #[error("{0}")]
    Validation(String),
    /// The requested degrees lie outside the exactness bound.
    #[error("{0}")]
    Truncation(String),
    /// Unreadable file, malformed JSON, schema violation or bad arguments.
    #[error("{0}")]
    Schema(String),
    /// A referenced entity is missing or has the wrong kind.
    #[error("{0}")]
    NotFound(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Truncation(_) => 2,
            CliError::Schema(_) => 3,
            CliError::NotFound(_) => 4,
        }
    }
}

/// Maps a core error raised while running a command (not while loading).
pub fn from_core(e: dgcalc_core::Error) -> CliError {
    use dgcalc_core::Error as E;
    match e {
        E::TruncationTooSmall(_) | E::DepthExceeded { .. } => CliError::Truncation(e.to_string()),
        E::NonUnital | E::NonUnitalMiddle | E::CompositionNotZero | E::InvalidComplex(_) => {
            CliError::Validation(e.to_string())
        }
        _ => CliError::Schema(e.to_string()),
    }
}
