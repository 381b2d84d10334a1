//! Inference of monotone update functions from an influence graph and
//! fixed-point observations.

pub mod encode;
pub mod problem;
pub mod solve;
pub mod tables;

use thiserror::Error;

use crate::encode::MonotonizeError;
use crate::model::Value;
use crate::skolem::SkolemError;
use crate::term::TermError;

pub use encode::{
    bounds_constraints, build_monotonicity_spec, build_signature, encode_inference,
    essentiality_constraint, fixed_point_constraint, update_symbol_name, InferOptions,
    InferenceEncoding, Signature,
};
pub use problem::{FixedPointObservation, InferenceProblem, NetworkVariable, Regulation, Sign};
pub use solve::{prepare_query, solve_inference, InferenceRun, PreparedQuery, SolveError};
pub use tables::{
    decode_solution, find_fixed_point, verify_solution, UpdateFunctionTable, Verification,
    Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferError {
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable name `{0}` is reserved or unquotable")]
    ReservedName(String),
    #[error("variable `{variable}`: {reason}")]
    BadDomain { variable: String, reason: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate regulation {regulator} -> {target}")]
    DuplicateRegulation { regulator: String, target: String },
    #[error("value {value} outside the domain of `{variable}`")]
    DomainViolation { variable: String, value: Value },
    #[error("observation `{0}` assigns no variable")]
    EmptyObservation(String),
    #[error("`{regulator}` does not regulate `{target}`")]
    NotARegulator { regulator: String, target: String },
    #[error("regulation {regulator} -> {target} is not essential")]
    NotEssential { regulator: String, target: String },
    #[error("variable `{0}` has an unbounded domain")]
    Unbounded(String),
    #[error("table mismatch: {0}")]
    TableMismatch(String),
    #[error(transparent)]
    Skolem(#[from] SkolemError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Monotonize(#[from] MonotonizeError),
}
