use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid model: {}", .0.join("; "))]
    InvalidModel(Vec<String>),

    /// A path comes closer to a pole of some form than the configured floor.
    #[error("path segment {segment} comes within {distance:e} of a singularity (floor {floor:e})")]
    Singularity {
        segment: usize,
        distance: f64,
        floor: f64,
    },

    #[error("integration did not converge: {0}")]
    NonConvergence(String),

    #[error("transversality violated: {0}")]
    Transversality(String),

    /// A checked identity or invariant failed.
    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than failed invariants.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_)
                | Error::Precondition(_)
                | Error::InvalidModel(_)
                | Error::Singularity { .. }
                | Error::Transversality(_)
                | Error::Json(_)
        )
    }
}
