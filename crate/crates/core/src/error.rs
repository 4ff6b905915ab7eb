use thiserror::Error;

use crate::trace::StepId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),

    #[error("schema violation at `{path}`: {message}")]
    SchemaViolation { path: String, message: String },

    #[error("invariant violation at `{path}`: {message}")]
    InvariantViolation { path: String, message: String },

    #[error("step {0} is not a node of the causal graph")]
    NodeNotFound(StepId),

    #[error("no grid point satisfies the sum-to-one constraint")]
    EmptyGrid,

    #[error("benchmark is empty")]
    EmptyBenchmark,

    #[error("contingency table has no discordant pairs")]
    DegenerateTable,

    #[error("template `{template}` cannot host a bug in bucket {bucket} after {attempts} attempts")]
    TemplateExhausted {
        template: String,
        bucket: String,
        attempts: usize,
    },

    #[error("ground-truth verification failed for {scenario_id}: {check}")]
    VerificationFailed { scenario_id: String, check: String },

    #[error("LLM adapter failure: {0}")]
    AdapterFailure(String),

    #[error("unparseable completion: {0:?}")]
    UnparseableCompletion(String),

    #[error("no answer key entry for scenario {0}")]
    MissingAnswers(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::SchemaViolation {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invariant(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvariantViolation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
