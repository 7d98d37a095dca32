use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] vclab::Error),

    #[error("{0}: {1}")]
    Io(String, std::io::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 3 for budget refusals, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(vclab::Error::Budget { .. }) => 3,
            _ => 2,
        }
    }
}
