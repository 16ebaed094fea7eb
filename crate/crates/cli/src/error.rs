use std::path::PathBuf;

use orthospeed_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for bad input, 3 for numeric failures, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

fn is_numeric(err: &CoreError) -> bool {
    match err {
        CoreError::Numeric(_) => true,
        CoreError::Sweep { source, .. } => is_numeric(source),
        _ => false,
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        if is_numeric(&err) {
            CliError::Numeric(err.to_string())
        } else {
            CliError::Validation(err.to_string())
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
