use crate::power::Infeasibility;
use crate::similarity::SimilarityError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Similarity(#[from] SimilarityError),

    #[error("distance {0} m is below the 1 m reference distance")]
    DistanceBelowReference(f64),

    #[error("no logistic parameters for K = {0}")]
    MissingParams(u32),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("semantic-rate target {sigma} needs {needed} Hz but only {available} Hz exist")]
    InfeasibleTarget { sigma: f64, needed: f64, available: f64 },

    #[error("NOMA region is empty: the similarity floor cannot be met at full power over the full band")]
    EmptyRegion,

    #[error("boundaries cover disjoint semantic-rate ranges")]
    DomainMismatch,

    #[error("targets are infeasible: {0}")]
    Infeasible(Infeasibility),

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json { context: context.into(), source }
    }
}
