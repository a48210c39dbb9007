use thiserror::Error;

use crate::model::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-positive kloc: {0}")]
    NonPositiveKloc(f64),

    #[error("project {id}: actual effort must be present and positive")]
    MissingEffort { id: String },

    #[error("rating {0} outside 1..6")]
    RatingOutOfRange(i64),

    #[error("unknown attribute mnemonic `{0}`")]
    UnknownAttribute(String),

    #[error("calibration parameters must be positive and finite (a={a}, b={b})")]
    InvalidParams { a: f64, b: f64 },

    #[error("invalid tuning table: {0}")]
    InvalidTable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("project {id} failed validation: {diagnostics:?}")]
    Validation { id: String, diagnostics: Vec<Diagnostic> },

    #[error("training data is empty")]
    EmptyTraining,

    #[error("need at least {need} training projects, have {have}")]
    InsufficientTraining { need: usize, have: usize },

    #[error("empty effort list")]
    EmptyInput,

    #[error("standardized error undefined: baseline denominator is zero")]
    UndefinedStandardizedError,

    #[error("unknown learner `{0}`")]
    UnknownLearner(String),

    #[error("learner spec `{spec}`: {reason}")]
    BadLearnerSpec { spec: String, reason: String },

    #[error("line {line}, column `{column}`: {reason}")]
    Parse { line: usize, column: String, reason: String },

    #[error("no projects in data")]
    NoProjects,

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
        Error::Parse { line, column: String::new(), reason: e.to_string() }
    }
}
