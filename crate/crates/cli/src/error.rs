use std::fmt;

/// A failed run: bad input from the user (exit 1) or a numerical failure
/// reported by the library (exit 2).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(liesys_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }

    pub fn missing(flag: &str) -> Self {
        CliError::Usage(format!("missing required --{flag}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            // library messages already start with their kind
            CliError::Numeric(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<liesys_core::Error> for CliError {
    fn from(e: liesys_core::Error) -> Self {
        CliError::Numeric(e)
    }
}
