//! Lazy instantiation: solve `φ`, add only the ground lemmas the current
//! candidate model violates, and repeat.

use thiserror::Error;

use crate::encode::lemma::{candidate_lemmas, Lemma};
use crate::encode::{EncodeError, EncodeOptions};
use crate::model::{Model, Valuation};
use crate::smt::{
    model_terms, query_valuation, SatResult, SolverError, SolverSession, SolverVerdict,
};
use crate::spec::MonotonicitySpec;
use crate::term::Term;

#[derive(Debug, Error)]
pub enum LazyError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone)]
pub struct LazyOutcome {
    pub verdict: SolverVerdict,
    pub check_sat_calls: usize,
    /// Lemmas asserted across all rounds, in assertion order.
    pub asserted: Vec<Lemma>,
    /// Size of the eager lemma set for the same input, before folding.
    pub candidate_count: usize,
}

/// Ground lemmas (over the applications of `phi`) falsified by `valuation`,
/// which must assign every constant and application of `phi`.
pub fn violated_lemmas(
    phi: &Term,
    spec: &MonotonicitySpec,
    valuation: &Valuation,
) -> Result<Vec<Term>, EncodeError> {
    let candidates = candidate_lemmas(phi, spec, true)?;
    let mut out = Vec::new();
    for l in &candidates.lemmas {
        if l.is_violated(valuation)? {
            out.push(l.to_term());
        }
    }
    Ok(out)
}

/// Runs the refinement loop on a fresh `session`. Solver failures (including
/// timeouts) are returned as errors so callers can tell them apart from an
/// `unknown` answer.
pub fn solve_lazy(
    phi: &Term,
    spec: &MonotonicitySpec,
    session: &mut dyn SolverSession,
    options: EncodeOptions,
) -> Result<LazyOutcome, LazyError> {
    if !phi.is_quantifier_free() {
        return Err(EncodeError::Quantified.into());
    }
    spec.check_against(phi).map_err(EncodeError::from)?;
    let candidates = candidate_lemmas(phi, spec, options.fold_constants)?;
    let mut pending: Vec<Lemma> = candidates.lemmas;
    let mut asserted = Vec::new();
    let terms = model_terms(phi);
    let start_calls = session.check_sat_calls();
    let outcome = |verdict, asserted, session: &dyn SolverSession| LazyOutcome {
        verdict,
        check_sat_calls: session.check_sat_calls() - start_calls,
        asserted,
        candidate_count: candidates.unfolded_count,
    };

    for c in phi.conjuncts() {
        session.assert_formula(&c)?;
    }
    loop {
        match session.check_sat()? {
            SatResult::Unsat => return Ok(outcome(SolverVerdict::Unsat, asserted, session)),
            SatResult::Unknown(r) => {
                return Ok(outcome(SolverVerdict::Unknown(r), asserted, session))
            }
            SatResult::Sat => {}
        }
        let valuation = query_valuation(session, &terms)?;
        let mut violated = Vec::new();
        let mut rest = Vec::with_capacity(pending.len());
        for l in pending {
            if l.is_violated(&valuation).map_err(EncodeError::from)? {
                violated.push(l);
            } else {
                rest.push(l);
            }
        }
        pending = rest;
        if violated.is_empty() {
            let model = Model::from_valuation(&valuation).map_err(SolverError::from)?;
            return Ok(outcome(SolverVerdict::Sat(model), asserted, session));
        }
        for l in violated {
            session.assert_formula(&l.to_term())?;
            asserted.push(l);
        }
    }
}
