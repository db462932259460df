//! CLI error classification and exit codes: 0 success, 1 validation failure,
//! 2 usage error, 3 numeric error. I/O problems count as general failures.

use cdkit_core::CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config keys or model parameters (exit 2).
    Usage(String),
    /// A requested check or run-level validation failed (exit 1).
    Validation(String),
    /// Numerics did not converge or are ill-posed (exit 3).
    Numeric(String),
    /// Filesystem problems (exit 1).
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    /// Core errors raised while interpreting user-supplied parameters.
    pub fn usage_from_core(e: CoreError) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "validation failure: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Core errors raised while computing (not while validating inputs) map to
/// the numeric class.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Validation { .. } | CoreError::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}
