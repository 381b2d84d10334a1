//! Translation of an inference problem into a formula over one
//! uninterpreted update symbol per variable, plus its monotonicity
//! specification.

use std::collections::HashSet;
use std::sync::Arc;

use crate::infer::problem::{InferenceProblem, Sign};
use crate::infer::InferError;
use crate::skolem::{skolemize, FreshNames, Skolem};
use crate::spec::MonotonicitySpec;
use crate::term::{Binder, FunctionSymbol, Term, TermKind};

/// Update symbols, one per variable, with their argument variables.
#[derive(Debug, Clone)]
pub struct Signature {
    pub symbols: Vec<Arc<FunctionSymbol>>,
    pub regulators: Vec<Vec<usize>>,
}

impl Signature {
    pub fn symbol(&self, target: usize) -> &Arc<FunctionSymbol> {
        &self.symbols[target]
    }

    /// 1-based argument position of `source` in the symbol of `target`.
    pub fn position(&self, target: usize, source: usize) -> Option<usize> {
        self.regulators[target]
            .iter()
            .position(|&r| r == source)
            .map(|k| k + 1)
    }
}

pub fn update_symbol_name(variable: &str) -> String {
    format!("f_{variable}")
}

pub fn build_signature(p: &InferenceProblem) -> Signature {
    let mut symbols = Vec::with_capacity(p.variables().len());
    let mut regulators = Vec::with_capacity(p.variables().len());
    for (i, v) in p.variables().iter().enumerate() {
        let regs = p.regulators(i).to_vec();
        let args = regs.iter().map(|&r| p.variables()[r].domain()).collect();
        symbols.push(FunctionSymbol::new(
            update_symbol_name(v.name()),
            args,
            v.domain(),
        ));
        regulators.push(regs);
    }
    Signature {
        symbols,
        regulators,
    }
}

pub fn build_monotonicity_spec(p: &InferenceProblem, sig: &Signature) -> MonotonicitySpec {
    let mut spec = MonotonicitySpec::new();
    for (t, f) in sig.symbols.iter().enumerate() {
        let mut mono = Vec::new();
        let mut anti = Vec::new();
        for (k, &s) in sig.regulators[t].iter().enumerate() {
            match p.regulation(s, t).map(|r| r.sign) {
                Some(Sign::Monotone) => mono.push(k + 1),
                Some(Sign::AntiMonotone) => anti.push(k + 1),
                _ => {}
            }
        }
        spec.insert(f, mono, anti)
            .expect("positions come from the symbol's own regulators");
    }
    spec
}

/// `∃x,y,z̄. f(…x…) ≠ f(…y…)` where only the position of `source` differs.
/// With `simplify` and a Boolean source, `x` and `y` become `true` and
/// `false`.
pub fn essentiality_constraint(
    p: &InferenceProblem,
    sig: &Signature,
    target: usize,
    source: usize,
    simplify: bool,
) -> Result<Term, InferError> {
    let name = |i: usize| p.variables()[i].name().to_string();
    let reg = p
        .regulation(source, target)
        .ok_or_else(|| InferError::NotARegulator {
            regulator: name(source),
            target: name(target),
        })?;
    if !reg.essential {
        return Err(InferError::NotEssential {
            regulator: name(source),
            target: name(target),
        });
    }
    let f = sig.symbol(target);
    let k = sig
        .position(target, source)
        .expect("regulator has a position");
    let src_sort = f.arg_sorts()[k - 1];
    let mut binders = Vec::new();
    let (x, y) = if simplify && src_sort.is_bool() {
        (Term::tt(), Term::ff())
    } else {
        let bx = Binder::new("x", src_sort);
        let by = Binder::new("y", src_sort);
        let pair = (bx.var(), by.var());
        binders.push(bx);
        binders.push(by);
        pair
    };
    let mut left = Vec::with_capacity(f.arity());
    let mut right = Vec::with_capacity(f.arity());
    for (j, sort) in f.arg_sorts().iter().enumerate() {
        if j + 1 == k {
            left.push(x.clone());
            right.push(y.clone());
        } else {
            let z = Binder::new(format!("z{}", j + 1), *sort);
            left.push(z.var());
            right.push(z.var());
            binders.push(z);
        }
    }
    let body = Term::ne(Term::apply(f, left)?, Term::apply(f, right)?)?;
    Ok(Term::exists(binders, body)?)
}

/// The fixed-point constraint of one observation. With `simplify`, observed
/// values are substituted into every application and only unobserved
/// variables are quantified; otherwise every variable is quantified and
/// pinned by an equation.
pub fn fixed_point_constraint(
    p: &InferenceProblem,
    sig: &Signature,
    observation: usize,
    simplify: bool,
) -> Result<Term, InferError> {
    let obs = &p.observations()[observation];
    let binder = |i: usize| {
        let v = &p.variables()[i];
        Binder::new(format!("x_{}", v.name()), v.domain())
    };
    let mut binders = Vec::new();
    let mut state = Vec::with_capacity(p.variables().len());
    for (i, v) in p.variables().iter().enumerate() {
        match obs.assignments.get(&i) {
            Some(d) if simplify => {
                if !d.in_domain(&v.domain()) {
                    return Err(InferError::DomainViolation {
                        variable: v.name().into(),
                        value: *d,
                    });
                }
                state.push(d.to_term());
            }
            _ => {
                let b = binder(i);
                state.push(b.var());
                binders.push(b);
            }
        }
    }
    let mut conj = Vec::new();
    for (i, f) in sig.symbols.iter().enumerate() {
        let args = sig.regulators[i]
            .iter()
            .map(|&r| state[r].clone())
            .collect();
        let app = Term::apply(f, args)?;
        if simplify && obs.assignments.contains_key(&i) {
            conj.push(Term::eq(app, state[i].clone())?);
        } else {
            conj.push(Term::eq(state[i].clone(), app)?);
        }
    }
    if !simplify {
        for (&i, d) in &obs.assignments {
            conj.push(Term::eq(state[i].clone(), d.to_term())?);
        }
    }
    Ok(Term::exists(binders, Term::and(conj)?)?)
}

/// `lo ≤ t ∧ t ≤ hi` for every bounded-integer application and constant of
/// `phi`, in order of first occurrence.
pub fn bounds_constraints(phi: &Term) -> Result<Term, InferError> {
    let mut seen = HashSet::new();
    let mut targets = Vec::new();
    phi.visit(&mut |t| {
        let bounded = match t.kind() {
            TermKind::Apply(..) | TermKind::Const(..) => t.sort().bounds().is_some(),
            _ => false,
        };
        if bounded && seen.insert(t.clone()) {
            targets.push(t.clone());
        }
    });
    let mut conj = Vec::with_capacity(2 * targets.len());
    for t in targets {
        let (lo, hi) = t.sort().bounds().unwrap();
        conj.push(Term::le(Term::int(lo), t.clone())?);
        conj.push(Term::le(t, Term::int(hi))?);
    }
    Ok(Term::and(conj)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InferOptions {
    /// Propagate observed values into applications and instantiate Boolean
    /// essentiality witnesses directly.
    pub simplify: bool,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions { simplify: true }
    }
}

#[derive(Debug, Clone)]
pub struct InferenceEncoding {
    /// Quantifier-free conjunction of essentiality, fixed-point and bounds
    /// constraints.
    pub phi: Term,
    pub spec: MonotonicitySpec,
    pub signature: Signature,
    pub skolems: Vec<Skolem>,
}

pub fn encode_inference(
    p: &InferenceProblem,
    options: InferOptions,
) -> Result<InferenceEncoding, InferError> {
    let sig = build_signature(p);
    let spec = build_monotonicity_spec(p, &sig);
    let mut fresh = FreshNames::new();
    let mut skolems = Vec::new();
    let mut conj = Vec::new();
    let mut add = |t: Term, conj: &mut Vec<Term>| -> Result<(), InferError> {
        let (sk, new) = skolemize(&t, &mut fresh)?;
        skolems.extend(new);
        conj.extend(sk.conjuncts());
        Ok(())
    };
    for target in 0..p.variables().len() {
        for &source in &sig.regulators[target] {
            if p.regulation(source, target).is_some_and(|r| r.essential) {
                add(
                    essentiality_constraint(p, &sig, target, source, options.simplify)?,
                    &mut conj,
                )?;
            }
        }
    }
    for o in 0..p.observations().len() {
        add(
            fixed_point_constraint(p, &sig, o, options.simplify)?,
            &mut conj,
        )?;
    }
    let core = Term::and(conj)?;
    let bounds = bounds_constraints(&core)?;
    let mut all = core.conjuncts();
    all.extend(bounds.conjuncts());
    let phi = Term::and(all)?;
    debug_assert!(phi.is_quantifier_free());
    Ok(InferenceEncoding {
        phi,
        spec,
        signature: sig,
        skolems,
    })
}
