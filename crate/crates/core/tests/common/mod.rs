#![allow(dead_code)]

use std::sync::Arc;

use monouf::smt::{ProcessSession, SOLVER_ENV};
use monouf::{CmpOp, FunctionSymbol, MonotonicitySpec, SolverCommand, Sort, Term};

pub struct Example {
    pub f: Arc<FunctionSymbol>,
    pub g: Arc<FunctionSymbol>,
    pub c1: Term,
    pub c2: Term,
    pub phi: Term,
}

/// `f(c1,2) = 4 ∧ f(c1+5,0) = c2 ∧ g(c2) < g(4)` over integers.
pub fn example() -> Example {
    let f = FunctionSymbol::new("f", vec![Sort::INT, Sort::INT], Sort::INT);
    let g = FunctionSymbol::new("g", vec![Sort::INT], Sort::INT);
    let c1 = Term::constant("c1", Sort::INT);
    let c2 = Term::constant("c2", Sort::INT);
    let f1 = Term::apply(&f, vec![c1.clone(), Term::int(2)]).unwrap();
    let shifted = Term::add(c1.clone(), Term::int(5)).unwrap();
    let f2 = Term::apply(&f, vec![shifted, Term::int(0)]).unwrap();
    let g1 = Term::apply(&g, vec![c2.clone()]).unwrap();
    let g2 = Term::apply(&g, vec![Term::int(4)]).unwrap();
    let phi = Term::and(vec![
        Term::eq(f1, Term::int(4)).unwrap(),
        Term::eq(f2, c2.clone()).unwrap(),
        Term::cmp(CmpOp::Lt, g1, g2).unwrap(),
    ])
    .unwrap();
    Example { f, g, c1, c2, phi }
}

impl Example {
    /// f monotone in 1 and anti-monotone in 2, g monotone.
    pub fn spec_m(&self) -> MonotonicitySpec {
        let mut m = MonotonicitySpec::new();
        m.insert(&self.f, [1], [2]).unwrap();
        m.insert(&self.g, [1], []).unwrap();
        m
    }

    /// f and g monotone in their first argument only.
    pub fn spec_m_prime(&self) -> MonotonicitySpec {
        let mut m = MonotonicitySpec::new();
        m.insert(&self.f, [1], []).unwrap();
        m.insert(&self.g, [1], []).unwrap();
        m
    }
}

/// The configured solver; panics with setup instructions when it cannot be
/// started.
pub fn solver() -> SolverCommand {
    let cmd = SolverCommand::from_env();
    assert!(
        cmd.is_available(),
        "SMT solver `{cmd}` not found; install z3 (e.g. `pip install z3-solver`) \
         or point {SOLVER_ENV} at an SMT-LIB2 solver in interactive mode"
    );
    cmd
}

pub fn session(assertions: &[Term]) -> ProcessSession {
    monouf::smt::spawn_for(
        &solver(),
        assertions,
        Some(std::time::Duration::from_secs(60)),
    )
    .expect("solver starts")
}

pub fn fig1_text() -> &'static str {
    include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../problems/fig1.problem"
    ))
}

pub fn fig1() -> monouf::infer::InferenceProblem {
    monouf::problem_file::parse_problem(fig1_text()).expect("fig1 parses")
}

/// Table of `target` computed from regulator values by `f`.
pub fn tabulate(
    p: &monouf::infer::InferenceProblem,
    target: usize,
    f: impl Fn(&[monouf::Value]) -> monouf::Value,
) -> monouf::infer::UpdateFunctionTable {
    let sig = monouf::infer::build_signature(p);
    let regs = p.regulators(target).to_vec();
    let domains: Vec<Vec<monouf::Value>> = regs
        .iter()
        .map(|&r| p.variables()[r].values().unwrap())
        .collect();
    let mut rows = std::collections::BTreeMap::new();
    monouf::model::for_each_point::<()>(&domains, &mut |x| {
        rows.insert(x.to_vec(), f(x));
        Ok(true)
    })
    .unwrap();
    monouf::infer::UpdateFunctionTable {
        target,
        symbol: sig.symbols[target].clone(),
        regulators: regs,
        rows,
    }
}

pub fn int(v: monouf::Value) -> i64 {
    v.as_int().unwrap()
}
