use std::io;

use rpig_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("only {0} conditioned samples accepted, need at least 500")]
    TooFewAcceptances(u64),
    #[error("model file: {0}")]
    ModelFile(String),
    #[error("rerun output differs from the manifest digest for {0}")]
    NotReproduced(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = AppError> = std::result::Result<T, E>;

impl AppError {
    /// Process exit code: 2 usage, 3 model, 4 non-convergence, 5 degenerate
    /// conditioning, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 2,
            AppError::ModelFile(_) => 3,
            AppError::Core(e) => match e {
                CoreError::InvalidModel(_)
                | CoreError::InvalidPreset(_)
                | CoreError::NotApplicable(_)
                | CoreError::UnsupportedBase(_)
                | CoreError::UndefinedConditional(_) => 3,
                CoreError::NoConvergence { .. } => 4,
                CoreError::DegenerateConditioning { .. } => 5,
                _ => 1,
            },
            AppError::TooFewAcceptances(_) => 5,
            _ => 1,
        }
    }
}
