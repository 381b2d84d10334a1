//! One inference query end to end: encode, pick a strategy, run the solver.

use std::time::Duration;

use thiserror::Error;

use crate::encode::{
    encode, solve_lazy, EncodeError, EncodeOptions, EncodedProblem, LazyError, Lemma, Strategy,
};
use crate::infer::encode::{encode_inference, InferOptions, InferenceEncoding};
use crate::infer::problem::InferenceProblem;
use crate::infer::InferError;
use crate::smt::{
    emit_script, solve_once, spawn_for, SolverCommand, SolverError, SolverSession, SolverVerdict,
};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Infer(#[from] InferError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

impl From<LazyError> for SolveError {
    fn from(e: LazyError) -> Self {
        match e {
            LazyError::Encode(e) => SolveError::Encode(e),
            LazyError::Solver(e) => SolveError::Solver(e),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InferenceRun {
    pub verdict: SolverVerdict,
    /// Lemmas (or quantified axioms) the strategy generated up front; for the
    /// lazy strategy, the lemmas it asserted over all rounds.
    pub lemma_count: usize,
    pub check_sat_calls: usize,
    /// Lazy strategy only: the lemmas asserted, in order.
    pub lazy_asserted: Vec<Lemma>,
    /// Lazy strategy only: size of the eager lemma set before folding.
    pub candidate_count: usize,
}

/// An encoded query, ready to be printed or solved.
#[derive(Debug, Clone)]
pub struct PreparedQuery {
    pub encoding: InferenceEncoding,
    pub encoded: EncodedProblem,
    pub options: EncodeOptions,
}

pub fn prepare_query(
    p: &InferenceProblem,
    strategy: Strategy,
    infer: InferOptions,
    options: EncodeOptions,
) -> Result<PreparedQuery, SolveError> {
    let encoding = encode_inference(p, infer)?;
    let encoded = encode(strategy, &encoding.phi, &encoding.spec, options)?;
    Ok(PreparedQuery {
        encoding,
        encoded,
        options,
    })
}

impl PreparedQuery {
    pub fn strategy(&self) -> Strategy {
        self.encoded.strategy
    }

    /// The SMT-LIB2 script a one-shot solver run would receive. For the lazy
    /// strategy this is the first round only.
    pub fn script(&self) -> String {
        emit_script(&self.encoded.assertions)
    }

    pub fn solve(
        &self,
        solver: &SolverCommand,
        time_limit: Option<Duration>,
    ) -> Result<InferenceRun, SolveError> {
        let phi = &self.encoding.phi;
        let mut session = spawn_for(solver, &self.encoded.assertions, time_limit)?;
        let run = if self.strategy() == Strategy::InstLazy {
            let out = solve_lazy(phi, &self.encoding.spec, &mut session, self.options)?;
            InferenceRun {
                verdict: out.verdict,
                lemma_count: out.asserted.len(),
                check_sat_calls: out.check_sat_calls,
                lazy_asserted: out.asserted,
                candidate_count: out.candidate_count,
            }
        } else {
            let verdict = solve_once(&mut session, &self.encoded.assertions, phi)?;
            InferenceRun {
                verdict,
                lemma_count: self.encoded.lemma_count,
                check_sat_calls: session.check_sat_calls(),
                lazy_asserted: Vec::new(),
                candidate_count: 0,
            }
        };
        session.dispose();
        Ok(run)
    }
}

/// Encodes `p` and solves it with `strategy` in a fresh solver process.
pub fn solve_inference(
    p: &InferenceProblem,
    strategy: Strategy,
    solver: &SolverCommand,
    time_limit: Option<Duration>,
    infer: InferOptions,
) -> Result<InferenceRun, SolveError> {
    prepare_query(p, strategy, infer, EncodeOptions::default())?.solve(solver, time_limit)
}
