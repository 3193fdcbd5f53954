use std::path::Path;

use thiserror::Error;

/// Failure of a CLI operation, classified by exit status.
#[derive(Debug, Error)]
pub enum AppError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl AppError {
    /// 1 config, 2 numerical, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 1,
            AppError::Numerical(_) => 2,
            AppError::Io(_) => 3,
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        AppError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<slvp_core::Error> for AppError {
    fn from(err: slvp_core::Error) -> Self {
        use slvp_core::Error as E;
        match err {
            E::NonFinite { .. } | E::CflViolation { .. } | E::Neutrality { .. } | E::ZeroNorm => {
                AppError::Numerical(err.to_string())
            }
            _ => AppError::Config(err.to_string()),
        }
    }
}

pub type AppResult<T> = std::result::Result<T, AppError>;
