use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Consistency(String),
    #[error("{0}")]
    Falsification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
            CliError::Consistency(_) => 4,
            CliError::Falsification(_) => 5,
        }
    }

    pub fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<kronpoly::Error> for CliError {
    fn from(err: kronpoly::Error) -> Self {
        use kronpoly::Error as E;
        match err {
            E::Consistency(_) | E::Eigen(_) => CliError::Consistency(err.to_string()),
            E::Falsification(_) => CliError::Falsification(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
