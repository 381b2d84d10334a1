mod common;

use common::{fig1, session};
use monouf::infer::{
    verify_solution, FixedPointObservation, InferenceProblem, NetworkVariable, Regulation, Sign,
};
use monouf::oracle::{
    count_solutions, oracle_inference, oracle_mono_sat, OracleError, OracleVerdict, DEFAULT_BUDGET,
};
use monouf::smt::solve_once;
use monouf::{
    encode_eager, CmpOp, EncodeOptions, FunctionSymbol, MonotonicitySpec, Sort, Term, Value,
};
use proptest::prelude::*;

fn self_loop(sign: Sign, essential: bool, obs: Option<bool>) -> InferenceProblem {
    InferenceProblem::new(
        vec![NetworkVariable::boolean("v")],
        vec![Regulation {
            source: 0,
            target: 0,
            sign,
            essential,
        }],
        obs.map(|b| FixedPointObservation {
            name: "F".into(),
            assignments: [(0, Value::Bool(b))].into_iter().collect(),
        })
        .into_iter()
        .collect(),
    )
    .unwrap()
}

#[test]
fn essential_positive_self_loop_is_identity() {
    let p = self_loop(Sign::Monotone, true, Some(false));
    let OracleVerdict::Sat(tables) = oracle_inference(&p, DEFAULT_BUDGET).unwrap() else {
        panic!("expected sat");
    };
    let rows: Vec<(Vec<Value>, Value)> = tables[0].rows.clone().into_iter().collect();
    assert_eq!(
        rows,
        [
            (vec![Value::Bool(false)], Value::Bool(false)),
            (vec![Value::Bool(true)], Value::Bool(true)),
        ]
    );
    assert!(verify_solution(&p, &tables).unwrap().is_pass());
    assert_eq!(count_solutions(&p, DEFAULT_BUDGET).unwrap(), 1);
}

#[test]
fn self_loop_counts() {
    assert_eq!(
        count_solutions(&self_loop(Sign::Unknown, false, None), DEFAULT_BUDGET).unwrap(),
        4
    );
    assert_eq!(
        count_solutions(&self_loop(Sign::Monotone, false, None), DEFAULT_BUDGET).unwrap(),
        3
    );
    assert_eq!(
        count_solutions(&self_loop(Sign::AntiMonotone, false, None), DEFAULT_BUDGET).unwrap(),
        3
    );
    // Negation is the only essential anti-monotone table and has no fixed point.
    let p = self_loop(Sign::AntiMonotone, true, Some(true));
    assert_eq!(count_solutions(&p, DEFAULT_BUDGET).unwrap(), 0);
    assert_eq!(
        oracle_inference(&p, DEFAULT_BUDGET).unwrap(),
        OracleVerdict::Unsat
    );
}

#[test]
fn multivalued_fig1_exceeds_default_budget() {
    // f_a has 64 rows over 4 levels: 4^64 candidate tables.
    let p = fig1();
    assert!(matches!(
        oracle_inference(&p, DEFAULT_BUDGET),
        Err(OracleError::Budget { .. })
    ));
    assert!(matches!(
        count_solutions(&p, DEFAULT_BUDGET),
        Err(OracleError::Budget { .. })
    ));
}

#[test]
fn unbounded_domains_are_refused() {
    let p = InferenceProblem::new(vec![NetworkVariable::unbounded("n")], vec![], vec![]).unwrap();
    assert!(matches!(
        oracle_inference(&p, DEFAULT_BUDGET),
        Err(OracleError::Unbounded(_))
    ));
}

#[test]
fn mono_sat_examples() {
    let g = FunctionSymbol::new("g", vec![Sort::INT], Sort::INT);
    let mut m = MonotonicitySpec::new();
    m.insert(&g, [1], []).unwrap();
    let phi = Term::cmp(
        CmpOp::Gt,
        Term::apply(&g, vec![Term::int(0)]).unwrap(),
        Term::apply(&g, vec![Term::int(1)]).unwrap(),
    )
    .unwrap();
    assert!(!oracle_mono_sat(&phi, &m, (0, 1), DEFAULT_BUDGET)
        .unwrap()
        .is_sat());
    assert!(
        oracle_mono_sat(&phi, &MonotonicitySpec::new(), (0, 1), DEFAULT_BUDGET)
            .unwrap()
            .is_sat()
    );
    assert!(oracle_mono_sat(&Term::tt(), &m, (0, 1), DEFAULT_BUDGET)
        .unwrap()
        .is_sat());
    let outside = Term::eq(Term::apply(&g, vec![Term::int(5)]).unwrap(), Term::int(0)).unwrap();
    assert!(matches!(
        oracle_mono_sat(&outside, &m, (0, 1), DEFAULT_BUDGET),
        Err(OracleError::OutOfGrid(_))
    ));
}

fn small_problem() -> impl Strategy<Value = InferenceProblem> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec((0u8..4, any::<bool>()), n * n),
                proptest::collection::vec(proptest::collection::vec(0u8..3, n), 0..3),
            )
        })
        .prop_map(|(n, edges, obs)| {
            let vars = (0..n)
                .map(|i| NetworkVariable::boolean(format!("v{i}")))
                .collect();
            let mut regs = Vec::new();
            for (k, (e, ess)) in edges.into_iter().enumerate() {
                let sign = match e {
                    0 => continue,
                    1 => Sign::Monotone,
                    2 => Sign::AntiMonotone,
                    _ => Sign::Unknown,
                };
                regs.push(Regulation {
                    source: k / n,
                    target: k % n,
                    sign,
                    essential: ess,
                });
            }
            let observations = obs
                .into_iter()
                .enumerate()
                .filter_map(|(j, o)| {
                    let assignments: std::collections::BTreeMap<usize, Value> = o
                        .into_iter()
                        .enumerate()
                        .filter(|(_, x)| *x < 2)
                        .map(|(i, x)| (i, Value::Bool(x == 1)))
                        .collect();
                    (!assignments.is_empty()).then(|| FixedPointObservation {
                        name: format!("F{j}"),
                        assignments,
                    })
                })
                .collect();
            InferenceProblem::new(vars, regs, observations).unwrap()
        })
}

fn tighten(p: &InferenceProblem, pick: usize) -> Option<InferenceProblem> {
    let mut regs = p.regulations().to_vec();
    let loose: Vec<usize> = (0..regs.len())
        .filter(|&i| !regs[i].essential || regs[i].sign == Sign::Unknown)
        .collect();
    if loose.is_empty() {
        return None;
    }
    let r = &mut regs[loose[pick % loose.len()]];
    if !r.essential {
        r.essential = true;
    } else {
        r.sign = Sign::Monotone;
    }
    InferenceProblem::new(p.variables().to_vec(), regs, p.observations().to_vec()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constraints_never_increase_counts(p in small_problem(), pick in 0usize..16, value in any::<bool>()) {
        let base = count_solutions(&p, DEFAULT_BUDGET).unwrap();
        if let Some(q) = tighten(&p, pick) {
            prop_assert!(count_solutions(&q, DEFAULT_BUDGET).unwrap() <= base);
        }
        let obs = FixedPointObservation {
            name: "extra".into(),
            assignments: [(0, Value::Bool(value))].into_iter().collect(),
        };
        let q = p.with_observation(obs).unwrap();
        prop_assert!(count_solutions(&q, DEFAULT_BUDGET).unwrap() <= base);
    }

    #[test]
    fn oracle_verdict_matches_count(p in small_problem()) {
        let count = count_solutions(&p, DEFAULT_BUDGET).unwrap();
        let verdict = oracle_inference(&p, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(count > 0, verdict.is_sat());
        if let OracleVerdict::Sat(tables) = verdict {
            prop_assert!(verify_solution(&p, &tables).unwrap().is_pass());
        }
    }
}

/// Random formula over two constants and one function on the grid 0..=2.
fn mono_instance() -> impl Strategy<Value = (Term, MonotonicitySpec)> {
    let arg = 0u8..5; // c1, c2, 0, 1, 2
    (
        1usize..=2,
        0u8..3,
        0u8..3,
        proptest::collection::vec(
            (
                0u8..6,
                proptest::collection::vec(arg.clone(), 2),
                arg,
                0u8..4,
            ),
            1..4,
        ),
        any::<bool>(),
    )
        .prop_map(|(arity, d1, d2, atoms, disjunctive)| {
            let h = FunctionSymbol::new("h", vec![Sort::INT; arity], Sort::INT);
            let c = [
                Term::constant("c1", Sort::INT),
                Term::constant("c2", Sort::INT),
            ];
            let pick = |k: u8| match k {
                0 | 1 => c[k as usize].clone(),
                k => Term::int(k as i64 - 2),
            };
            let app = |args: &[u8]| {
                Term::apply(&h, args[..arity].iter().map(|&k| pick(k)).collect()).unwrap()
            };
            let mut body = Vec::new();
            for (op, args, other, kind) in &atoms {
                let op = [
                    CmpOp::Le,
                    CmpOp::Lt,
                    CmpOp::Ge,
                    CmpOp::Gt,
                    CmpOp::Eq,
                    CmpOp::Ne,
                ][*op as usize];
                let lhs = app(args);
                let rhs = match kind {
                    0 => app(&[*other, args[0]]),
                    1 => pick(*other),
                    _ => app(&[args[1], *other]),
                };
                body.push(Term::cmp(op, lhs, rhs).unwrap());
            }
            let body = if disjunctive {
                Term::or(body).unwrap()
            } else {
                Term::and(body).unwrap()
            };
            let mut conj = vec![body.clone()];
            let mut bounded: Vec<Term> = c.to_vec();
            bounded.extend(monouf::term::application_terms(&body));
            for t in bounded {
                conj.push(Term::le(Term::int(0), t.clone()).unwrap());
                conj.push(Term::le(t, Term::int(2)).unwrap());
            }
            let mut m = MonotonicitySpec::new();
            let dir = |d: u8, i: usize| match d {
                0 => (vec![i], vec![]),
                1 => (vec![], vec![i]),
                _ => (vec![], vec![]),
            };
            let (mut mono, mut anti) = dir(d1, 1);
            if arity == 2 {
                let (m2, a2) = dir(d2, 2);
                mono.extend(m2);
                anti.extend(a2);
            }
            m.insert(&h, mono, anti).unwrap();
            (Term::and(conj).unwrap(), m)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mono_oracle_agrees_with_eager((phi, m) in mono_instance()) {
        let expected = oracle_mono_sat(&phi, &m, (0, 2), DEFAULT_BUDGET).unwrap().is_sat();
        let enc = encode_eager(&phi, &m, EncodeOptions::default()).unwrap();
        let mut s = session(&enc.assertions);
        let verdict = solve_once(&mut s, &enc.assertions, &phi).unwrap();
        prop_assert!(!matches!(verdict, monouf::SolverVerdict::Unknown(_)));
        prop_assert_eq!(verdict.is_sat(), expected, "{}", phi);
    }
}
