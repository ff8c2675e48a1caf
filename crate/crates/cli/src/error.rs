use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    /// A surface or domain that cannot be evaluated as requested.
    #[error(transparent)]
    Domain(zmcrot_core::Error),

    /// Failure of the integrator or of the family construction it starts from.
    #[error(transparent)]
    Integration(zmcrot_core::Error),

    #[error("export grid is not regular; offending nodes:\n{}", nodes.join("\n"))]
    SingularGrid { nodes: Vec<String> },

    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 1 for a completed run that did not pass, 2 for anything that kept the
    /// run from completing as configured.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Integration(_) | CliError::Failed(_) => 1,
            CliError::Config(_) | CliError::Io { .. } | CliError::Domain(_) | CliError::SingularGrid { .. } => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> CliError {
        CliError::Io { path: path.into(), source }
    }
}

impl From<zmcrot_core::Error> for CliError {
    fn from(e: zmcrot_core::Error) -> CliError {
        CliError::Domain(e)
    }
}
