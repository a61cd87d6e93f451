use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("problem size {n} exceeds the supported maximum of {max}")]
    Capacity { n: usize, max: usize },

    #[error("degenerate instance: every feasible solution has the same cost")]
    Degenerate,

    #[error("infeasible solution: {0}")]
    Infeasible(String),

    #[error("index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    #[error("non-finite objective at iteration {iteration} (point {point:?})")]
    NonFinite { iteration: usize, point: Vec<f64> },

    #[error("empty support")]
    EmptySupport,

    #[error("instance {id}: {source}")]
    Instance {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn with_instance(self, id: &str) -> Error {
        Error::Instance {
            id: id.to_string(),
            source: Box::new(self),
        }
    }
}
