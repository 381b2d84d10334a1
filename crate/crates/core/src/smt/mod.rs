//! Solver backend: SMT-LIB2 emission, the incremental session contract, an
//! external-process driver, and response parsing.

pub mod emit;
pub mod model_parse;
pub mod process;
pub mod session;
pub mod sexp;

pub use emit::{
    collect_declarations, emit_script, emit_smtlib, logic_for, Declaration, ScriptOptions,
};
pub use model_parse::{parse_model_response, parse_value, parse_value_response};
pub use process::{ProcessSession, SolverCommand, DEFAULT_SOLVER, SOLVER_ENV};
pub use session::{SatResult, SolverError, SolverSession, SolverVerdict};

use std::time::Duration;

use crate::model::{Model, Valuation};
use crate::term::{application_terms, constants_of, Term};

/// Ground terms whose values determine a model of `phi`: every constant and
/// every application.
pub fn model_terms(phi: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = constants_of(phi)
        .into_iter()
        .map(|(n, s)| Term::constant(n, s))
        .collect();
    out.extend(application_terms(phi).into_iter().filter(|t| t.is_ground()));
    out
}

/// Queries values for `terms` and packages them as a valuation.
pub fn query_valuation(
    session: &mut dyn SolverSession,
    terms: &[Term],
) -> Result<Valuation, SolverError> {
    let values = session.value_of(terms)?;
    Ok(terms.iter().cloned().zip(values).collect())
}

/// Asserts `assertions`, checks, and on `sat` reads back a model over the
/// constants and applications of `model_source`.
pub fn solve_once(
    session: &mut dyn SolverSession,
    assertions: &[Term],
    model_source: &Term,
) -> Result<SolverVerdict, SolverError> {
    for a in assertions {
        session.assert_formula(a)?;
    }
    match session.check_sat()? {
        SatResult::Unsat => Ok(SolverVerdict::Unsat),
        SatResult::Unknown(r) => Ok(SolverVerdict::Unknown(r)),
        SatResult::Sat => {
            let terms = model_terms(model_source);
            let valuation = query_valuation(session, &terms)?;
            Ok(SolverVerdict::Sat(Model::from_valuation(&valuation)?))
        }
    }
}

/// Spawns a session for `assertions` with the logic they need.
pub fn spawn_for(
    command: &SolverCommand,
    assertions: &[Term],
    time_limit: Option<Duration>,
) -> Result<ProcessSession, SolverError> {
    let mut s = ProcessSession::spawn(command, logic_for(assertions))?;
    s.set_time_limit(time_limit);
    Ok(s)
}
