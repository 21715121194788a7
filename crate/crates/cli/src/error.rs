use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] ghznet::Error),

    /// The command ran but its result misses the required accuracy.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// 1 for bad input or IO, 2 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        use ghznet::Error as E;
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Core(E::Input(_) | E::DegenerateCoupling { .. } | E::Capacity { .. } | E::EngineCapability(_)) => 1,
            CliError::Core(_) | CliError::Failed(_) => 2,
        }
    }
}
