use thiserror::Error;

/// Errors surfaced by the command line, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] reglab_core::Error),
    #[error("{0}")]
    CheckFailed(String),
    #[error("resource limit exceeded: {0}")]
    Limit(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use reglab_core::Error as E;
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::CheckFailed(_) => EXIT_CHECK_FAILED,
            CliError::Limit(_) | CliError::Core(E::ResourceLimit(_)) => EXIT_LIMIT,
            CliError::Core(E::Internal(_) | E::InfiniteQIndex(_)) => EXIT_CHECK_FAILED,
            CliError::Core(_) => EXIT_INPUT,
        }
    }
}
