use thiserror::Error;

/// Exit status for a run whose checks completed but did not all pass.
pub const EXIT_CHECK_FAILED: i32 = 2;
/// Exit status for usage, configuration and pipeline errors.
pub const EXIT_ERROR: i32 = 1;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Pipeline(#[from] driftplate::Error),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("serialization error: {0}")]
    Serialize(String),
}

impl LabError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        LabError::Io { path: path.display().to_string(), source }
    }
}

pub type LabResult<T> = Result<T, LabError>;
