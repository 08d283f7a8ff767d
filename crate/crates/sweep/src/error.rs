use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    /// A requested value lies outside the domain of the experiment.
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Core(#[from] ncoherence::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl SweepError {
    /// 3 for bad parameter values, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        use ncoherence::Error as E;
        match self {
            SweepError::Domain(_) => 3,
            SweepError::Core(
                E::InvalidParameter { .. } | E::ExplicitDeltaRequired { .. } | E::RegisterTooLarge { .. },
            ) => 3,
            _ => 1,
        }
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> SweepError {
    SweepError::Domain(msg.into())
}

pub type Result<T> = std::result::Result<T, SweepError>;
