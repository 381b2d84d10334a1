//! Strategies for satisfiability under a monotonicity specification.
//!
//! * quantified-individual: one universal per constrained argument;
//! * quantified-aggregated: one universal per constrained symbol;
//! * instantiated-eager: all ground lemmas over pairs of applications;
//! * instantiated-lazy: ground lemmas added on demand ([`lazy`]).

pub mod lazy;
pub mod lemma;
pub mod monotonize;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::EvalError;
use crate::spec::{Direction, MonotonicitySpec, SpecError};
use crate::term::{ordering_atom, ArgVector, Binder, Term, TermError};

pub use lazy::{solve_lazy, violated_lemmas, LazyError, LazyOutcome};
pub use lemma::{candidate_lemmas, monotonicity_lemma, CandidateSet, Lemma};
pub use monotonize::{monotonize_model, MonotoneModel, MonotonizeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    QuantIndividual,
    QuantAggregated,
    InstEager,
    InstLazy,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::QuantIndividual,
        Strategy::QuantAggregated,
        Strategy::InstEager,
        Strategy::InstLazy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::QuantIndividual => "quantified-individual",
            Strategy::QuantAggregated => "quantified-aggregated",
            Strategy::InstEager => "instantiated-eager",
            Strategy::InstLazy => "instantiated-lazy",
        }
    }

    pub fn is_quantified(self) -> bool {
        matches!(self, Strategy::QuantIndividual | Strategy::QuantAggregated)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown encoding `{s}`"))
    }
}

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("formula must be quantifier-free for instantiation")]
    Quantified,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Result of an encoder: the formula to hand to a solver, as a list of
/// top-level conjuncts.
#[derive(Debug, Clone)]
pub struct EncodedProblem {
    pub assertions: Vec<Term>,
    /// Number of monotonicity constraints added (quantified conjuncts or
    /// ground lemmas before folding).
    pub lemma_count: usize,
    /// Lemmas actually asserted, for instantiation strategies.
    pub lemmas: Vec<Lemma>,
    pub strategy: Strategy,
}

impl EncodedProblem {
    pub fn formula(&self) -> Term {
        Term::and(self.assertions.clone()).expect("assertions are Boolean")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Evaluate literal comparisons in lemma antecedents and drop lemmas
    /// whose antecedent is false.
    pub fold_constants: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            fold_constants: true,
        }
    }
}

fn check_spec(phi: &Term, spec: &MonotonicitySpec) -> Result<(), EncodeError> {
    spec.check_against(phi)?;
    for (f, _) in spec.iter() {
        if !f.is_uninterpreted() {
            return Err(SpecError::Interpreted(f.name().to_string()).into());
        }
    }
    Ok(())
}

/// `φ ∧ ⋀_f ⋀_{i ∈ f_m ∪ f_a} ψ^f_i` with
/// `ψ^f_i = ∀x̄ ∀y. x_i ≤ y → f(x̄) ≤ f(x̄[i:=y])` (reversed for anti-monotone
/// positions).
pub fn encode_quant_individual(
    phi: &Term,
    spec: &MonotonicitySpec,
) -> Result<EncodedProblem, EncodeError> {
    check_spec(phi, spec)?;
    let mut assertions = phi.conjuncts();
    let mut count = 0;
    for (f, arg_spec) in spec.constrained() {
        let xs: Vec<Binder> = f
            .arg_sorts()
            .iter()
            .enumerate()
            .map(|(k, s)| Binder::new(format!("x{}", k + 1), *s))
            .collect();
        let xv = ArgVector::new(xs.iter().map(Binder::var).collect());
        for i in arg_spec.constrained() {
            let y = Binder::new("y", f.arg_sorts()[i - 1]);
            let lhs = Term::apply(f, xv.0.clone())?;
            let rhs = Term::apply(f, xv.subst_at(i, y.var())?.0)?;
            let premise = ordering_atom(xv.get(i).unwrap().clone(), y.var())?;
            let conclusion = match arg_spec.direction(i) {
                Direction::Monotone => ordering_atom(lhs, rhs)?,
                Direction::AntiMonotone => ordering_atom(rhs, lhs)?,
                Direction::Free => unreachable!("constrained position"),
            };
            let mut binders = xs.clone();
            binders.push(y);
            assertions.push(Term::forall(binders, Term::implies(premise, conclusion)?)?);
            count += 1;
        }
    }
    Ok(EncodedProblem {
        assertions,
        lemma_count: count,
        lemmas: Vec::new(),
        strategy: Strategy::QuantIndividual,
    })
}

/// `φ ∧ ⋀_f ∀x̄ ∀ȳ. ψ(f, x̄, ȳ)`, one universal per symbol with a non-empty
/// specification.
pub fn encode_quant_aggregated(
    phi: &Term,
    spec: &MonotonicitySpec,
) -> Result<EncodedProblem, EncodeError> {
    check_spec(phi, spec)?;
    let mut assertions = phi.conjuncts();
    let mut count = 0;
    for (f, arg_spec) in spec.constrained() {
        let xs: Vec<Binder> = f
            .arg_sorts()
            .iter()
            .enumerate()
            .map(|(k, s)| Binder::new(format!("x{}", k + 1), *s))
            .collect();
        let ys: Vec<Binder> = f
            .arg_sorts()
            .iter()
            .enumerate()
            .map(|(k, s)| Binder::new(format!("y{}", k + 1), *s))
            .collect();
        let lemma = lemma::build_lemma(
            f,
            &ArgVector::new(xs.iter().map(Binder::var).collect()),
            &ArgVector::new(ys.iter().map(Binder::var).collect()),
            arg_spec,
            false,
        )?
        .expect("unfolded lemmas are never dropped");
        let binders = xs.into_iter().chain(ys).collect();
        assertions.push(Term::forall(binders, lemma.to_term())?);
        count += 1;
    }
    Ok(EncodedProblem {
        assertions,
        lemma_count: count,
        lemmas: Vec::new(),
        strategy: Strategy::QuantAggregated,
    })
}

/// `φ` conjoined with every ground lemma over ordered pairs of distinct
/// applications of each constrained symbol.
pub fn encode_eager(
    phi: &Term,
    spec: &MonotonicitySpec,
    options: EncodeOptions,
) -> Result<EncodedProblem, EncodeError> {
    check_spec(phi, spec)?;
    if !phi.is_quantifier_free() {
        return Err(EncodeError::Quantified);
    }
    let candidates = candidate_lemmas(phi, spec, options.fold_constants)?;
    let mut assertions = phi.conjuncts();
    assertions.extend(candidates.lemmas.iter().map(Lemma::to_term));
    Ok(EncodedProblem {
        assertions,
        lemma_count: candidates.unfolded_count,
        lemmas: candidates.lemmas,
        strategy: Strategy::InstEager,
    })
}

/// Dispatches the non-lazy strategies; the lazy strategy encodes to `φ`
/// itself with no lemmas.
pub fn encode(
    strategy: Strategy,
    phi: &Term,
    spec: &MonotonicitySpec,
    options: EncodeOptions,
) -> Result<EncodedProblem, EncodeError> {
    match strategy {
        Strategy::QuantIndividual => encode_quant_individual(phi, spec),
        Strategy::QuantAggregated => encode_quant_aggregated(phi, spec),
        Strategy::InstEager => encode_eager(phi, spec, options),
        Strategy::InstLazy => {
            check_spec(phi, spec)?;
            if !phi.is_quantifier_free() {
                return Err(EncodeError::Quantified);
            }
            Ok(EncodedProblem {
                assertions: phi.conjuncts(),
                lemma_count: 0,
                lemmas: Vec::new(),
                strategy: Strategy::InstLazy,
            })
        }
    }
}
