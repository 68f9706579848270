use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] hv_core::Error),
    #[error("cannot write report: {0}")]
    Output(String),
}

impl CliError {
    /// Every error, including a failed write, exits with the input-error code.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
