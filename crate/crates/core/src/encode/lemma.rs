//! Ground monotonicity lemmas: instances of the aggregated monotonicity
//! implication at pairs of application argument vectors.

use std::sync::Arc;

use crate::encode::EncodeError;
use crate::model::{eval_valuation, fold_literal_comparison, EvalError, Valuation};
use crate::spec::{ArgSpec, Direction, MonotonicitySpec};
use crate::term::{applications_of, ordering_atom, ArgVector, FunctionSymbol, Term, TermError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma {
    pub symbol: Arc<FunctionSymbol>,
    pub lhs: ArgVector,
    pub rhs: ArgVector,
    /// Conjuncts of the antecedent, after optional folding.
    pub antecedent: Vec<Term>,
    pub consequent: Term,
}

impl Lemma {
    pub fn to_term(&self) -> Term {
        if self.antecedent.is_empty() {
            return self.consequent.clone();
        }
        let ante = Term::and(self.antecedent.clone()).expect("antecedent atoms are Boolean");
        Term::implies(ante, self.consequent.clone()).expect("lemma parts are Boolean")
    }

    /// Antecedent holds and consequent fails under `valuation`.
    pub fn is_violated(&self, valuation: &Valuation) -> Result<bool, EvalError> {
        for a in &self.antecedent {
            if eval_valuation(a, valuation)? != crate::model::Value::Bool(true) {
                return Ok(false);
            }
        }
        Ok(eval_valuation(&self.consequent, valuation)? == crate::model::Value::Bool(false))
    }
}

/// Builds the lemma for `f` at `(t, s)`. With `fold`, antecedent comparisons
/// between literals are evaluated: true ones are dropped, and a false one
/// drops the whole lemma (`None`).
pub(crate) fn build_lemma(
    f: &Arc<FunctionSymbol>,
    t: &ArgVector,
    s: &ArgVector,
    spec: &ArgSpec,
    fold: bool,
) -> Result<Option<Lemma>, EncodeError> {
    if t.len() != f.arity() || s.len() != f.arity() {
        return Err(EncodeError::Term(TermError::ArityMismatch {
            symbol: f.name().to_string(),
            expected: f.arity(),
            found: if t.len() != f.arity() {
                t.len()
            } else {
                s.len()
            },
        }));
    }
    let mut antecedent = Vec::with_capacity(f.arity());
    for (i, (ti, si)) in t.iter().zip(s.iter()).enumerate() {
        let atom = match spec.direction(i + 1) {
            Direction::Monotone => ordering_atom(ti.clone(), si.clone())?,
            Direction::AntiMonotone => ordering_atom(si.clone(), ti.clone())?,
            Direction::Free => Term::eq(ti.clone(), si.clone())?,
        };
        if fold {
            match fold_literal_comparison(&atom) {
                Some(true) => continue,
                Some(false) => return Ok(None),
                None => {}
            }
        }
        antecedent.push(atom);
    }
    let consequent = ordering_atom(Term::apply(f, t.0.clone())?, Term::apply(f, s.0.clone())?)?;
    Ok(Some(Lemma {
        symbol: f.clone(),
        lhs: t.clone(),
        rhs: s.clone(),
        antecedent,
        consequent,
    }))
}

/// The ground instance `(⋀ t_i ⊑_i s_i) → f(t) ≤ f(s)`, where `⊑_i` is `≤`
/// for monotone positions, `≥` for anti-monotone ones and `=` otherwise.
pub fn monotonicity_lemma(
    f: &Arc<FunctionSymbol>,
    t: &ArgVector,
    s: &ArgVector,
    spec: &MonotonicitySpec,
) -> Result<Term, EncodeError> {
    let empty = ArgSpec::default();
    let arg_spec = spec.get(f).unwrap_or(&empty);
    Ok(build_lemma(f, t, s, arg_spec, false)?
        .expect("unfolded lemmas are never dropped")
        .to_term())
}

/// Every lemma over ordered pairs of distinct application vectors of each
/// constrained symbol, symbols in spec order and pairs in occurrence order.
pub fn candidate_lemmas(
    phi: &Term,
    spec: &MonotonicitySpec,
    fold: bool,
) -> Result<CandidateSet, EncodeError> {
    let mut lemmas = Vec::new();
    let mut unfolded_count = 0;
    for (f, arg_spec) in spec.constrained() {
        let apps = applications_of(phi, f);
        unfolded_count += apps.len() * apps.len().saturating_sub(1);
        for (i, t) in apps.iter().enumerate() {
            for (j, s) in apps.iter().enumerate() {
                if i == j {
                    continue;
                }
                if let Some(l) = build_lemma(f, t, s, arg_spec, fold)? {
                    lemmas.push(l);
                }
            }
        }
    }
    Ok(CandidateSet {
        lemmas,
        unfolded_count,
    })
}

#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub lemmas: Vec<Lemma>,
    /// Number of ordered pairs before folding, `Σ n_f (n_f - 1)`.
    pub unfolded_count: usize,
}
