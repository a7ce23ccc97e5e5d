use thiserror::Error;

use crate::dsl::Violation;

/// Errors raised by the algebra and evaluation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),

    #[error("unknown {kind} `{name}`")]
    Lookup { kind: &'static str, name: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Some value needed for the requested output is not determined by the data.
    #[error("underdetermined LES: {0}")]
    Underdetermined(String),

    #[error("rank undetermined at {path}: summand certificate only")]
    RankUndetermined { path: String },

    #[error("inconsistent split data at {path}: {detail}")]
    InconsistentSplit { path: String, detail: String },

    #[error("hypothesis error: {0}")]
    Hypothesis(String),

    #[error("tree failed validation ({} violation(s))", .0.len())]
    Invalid(Vec<Violation>),

    #[error("table format error at line {line}: {message}")]
    TableFormat { line: usize, message: String },

    #[error("cannot combine rational and integral groups: {0}")]
    MixedCoefficients(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
