use std::time::Duration;

use thiserror::Error;

use crate::model::{EvalError, Model, Value};
use crate::smt::emit::Declaration;
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat,
    Unsat,
    Unknown(String),
}

/// Final answer of a satisfiability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverVerdict {
    Sat(Model),
    Unsat,
    Unknown(String),
}

impl SolverVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolverVerdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolverVerdict::Unsat)
    }

    pub fn label(&self) -> &'static str {
        match self {
            SolverVerdict::Sat(_) => "sat",
            SolverVerdict::Unsat => "unsat",
            SolverVerdict::Unknown(_) => "unknown",
        }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("failed to start solver `{command}`: {source}")]
    Spawn {
        command: String,
        source: std::io::Error,
    },
    #[error("solver i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("timeout")]
    Timeout,
    #[error("solver exited unexpectedly")]
    Died,
    #[error("malformed solver response: {0}")]
    Malformed(String),
    #[error("solver reported error: {0}")]
    Reported(String),
    #[error("session misuse: {0}")]
    Usage(&'static str),
    #[error("unsupported model syntax ({reason}): {raw}")]
    UnsupportedModel { reason: String, raw: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Incremental solving contract. Assertions are cumulative; value queries
/// are legal only right after a `sat` answer.
pub trait SolverSession {
    fn declare(&mut self, decl: &Declaration) -> Result<(), SolverError>;

    /// Asserts `t`, declaring any symbol of `t` not declared yet.
    fn assert_formula(&mut self, t: &Term) -> Result<(), SolverError>;

    fn check_sat(&mut self) -> Result<SatResult, SolverError>;

    fn value_of(&mut self, terms: &[Term]) -> Result<Vec<Value>, SolverError>;

    fn extract_model(&mut self) -> Result<Model, SolverError>;

    /// Wall-clock budget for the rest of the session, starting now.
    fn set_time_limit(&mut self, limit: Option<Duration>);

    fn check_sat_calls(&self) -> usize;

    fn dispose(&mut self);
}

/// Tracks the last answer so misuse is rejected uniformly by all backends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) enum Phase {
    #[default]
    Asserting,
    Sat,
    Unsat,
    Unknown,
    Dead,
}

impl Phase {
    pub(crate) fn require_sat(self) -> Result<(), SolverError> {
        match self {
            Phase::Sat => Ok(()),
            Phase::Asserting => Err(SolverError::Usage(
                "value query without a preceding sat answer",
            )),
            Phase::Unsat => Err(SolverError::Usage("value query after unsat")),
            Phase::Unknown => Err(SolverError::Usage("value query after unknown")),
            Phase::Dead => Err(SolverError::Died),
        }
    }
}
