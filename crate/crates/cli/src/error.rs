use thiserror::Error;

use crate::syntax::{Pos, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("line {}, column {}: {message}", pos.line, pos.col)]
    Syntax { pos: Pos, message: String },

    #[error("line {}, column {}: undefined name `{name}`", pos.line, pos.col)]
    Undefined { pos: Pos, name: String },

    #[error("line {line}: {error}")]
    Core { line: usize, error: simploc_core::Error },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> Self {
        CliError::Syntax { pos: e.pos, message: e.message }
    }
}

/// Exit status for an error: 1 for input that is malformed or invalid, 2 for
/// a computation that cannot be completed.
pub fn exit_code(e: &CliError) -> i32 {
    use simploc_core::Error as E;
    match e {
        CliError::Syntax { .. } | CliError::Undefined { .. } | CliError::Io { .. } => 1,
        CliError::Core { error, .. } => match error {
            E::Invalid(_) | E::Range(_) | E::Lookup { .. } | E::TableFormat { .. } => 1,
            E::Unsupported(_)
            | E::Underdetermined(_)
            | E::RankUndetermined { .. }
            | E::InconsistentSplit { .. }
            | E::Hypothesis(_)
            | E::MixedCoefficients(_)
            | E::Internal(_) => 2,
        },
    }
}

/// Full message, with one line per validation violation.
pub fn render(e: &CliError) -> String {
    let mut out = format!("error: {e}");
    if let CliError::Core { error: simploc_core::Error::Invalid(vs), .. } = e {
        for v in vs {
            out.push_str(&format!("\n  {v}"));
        }
    }
    out
}
