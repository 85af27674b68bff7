use std::fmt;

/// Top-level CLI failure, mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid arguments or configuration (exit 2).
    Usage(String),
    /// Quadrature ran out of subdivisions (exit 3).
    NonConvergence(String),
    /// File system failure, with the offending path (exit 1).
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::NonConvergence(msg) => write!(f, "did not converge: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
