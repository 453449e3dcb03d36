use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("solver failed: {0}")]
    Solver(String),
    #[error("not envy-free: {0}")]
    NotEnvyFree(String),
}

impl CliError {
    /// Process exit code. `2` is shared with argument parsing errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Instance(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Solver(_) => 5,
            CliError::NotEnvyFree(_) => 6,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
