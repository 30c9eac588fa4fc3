use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Invalid flags, config file or parameter combination.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("run failed: {0}")]
    Run(#[from] minmax_oco::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    /// Process exit code: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 1,
        }
    }
}
