mod common;

use std::collections::BTreeMap;

use common::{example, session};
use monouf::encode::{
    candidate_lemmas, monotonicity_lemma, monotonize::dominated, violated_lemmas, LazyOutcome,
};
use monouf::model::{for_each_point, FunctionTable, Valuation};
use monouf::smt::{emit_script, solve_once, SolverSession};
use monouf::{
    encode_eager, encode_quant_aggregated, encode_quant_individual, monotonize_model, solve_lazy,
    ArgSpec, ArgVector, EncodeOptions, FunctionSymbol, Model, MonotonicitySpec, SolverVerdict,
    Sort, Term, Value,
};
use proptest::prelude::*;

fn unfolded() -> EncodeOptions {
    EncodeOptions {
        fold_constants: false,
    }
}

fn strings(ts: &[Term]) -> Vec<String> {
    ts.iter().map(Term::to_string).collect()
}

#[test]
fn individual_encoding_one_universal_per_constrained_argument() {
    let ex = example();
    let enc = encode_quant_individual(&ex.phi, &ex.spec_m()).unwrap();
    assert_eq!(enc.lemma_count, 3);
    assert_eq!(enc.assertions.len(), 6);
    assert_eq!(
        strings(&enc.assertions[3..]),
        [
            "(forall ((x1 Int) (x2 Int) (y Int)) (=> (<= x1 y) (<= (f x1 x2) (f y x2))))",
            "(forall ((x1 Int) (x2 Int) (y Int)) (=> (<= x2 y) (<= (f x1 y) (f x1 x2))))",
            "(forall ((x1 Int) (y Int)) (=> (<= x1 y) (<= (g x1) (g y))))",
        ]
    );
    let enc = encode_quant_individual(&ex.phi, &ex.spec_m_prime()).unwrap();
    assert_eq!(enc.lemma_count, 2);
    assert_eq!(enc.assertions.len(), 5);
}

#[test]
fn vacuous_spec_leaves_formula_alone() {
    let ex = example();
    let mut m = MonotonicitySpec::new();
    m.insert(&ex.f, [], []).unwrap();
    let enc = encode_quant_individual(&ex.phi, &m).unwrap();
    assert_eq!(enc.lemma_count, 0);
    assert_eq!(enc.formula(), ex.phi);
    let enc = encode_quant_aggregated(&ex.phi, &m).unwrap();
    assert_eq!(enc.lemma_count, 0);
    assert_eq!(enc.formula(), ex.phi);
}

#[test]
fn aggregated_encoding_one_universal_per_symbol() {
    let ex = example();
    let enc = encode_quant_aggregated(&ex.phi, &ex.spec_m()).unwrap();
    assert_eq!(enc.lemma_count, 2);
    assert_eq!(
        strings(&enc.assertions[3..]),
        [
            "(forall ((x1 Int) (x2 Int) (y1 Int) (y2 Int)) (=> (and (<= x1 y1) (<= y2 x2)) (<= (f x1 x2) (f y1 y2))))",
            "(forall ((x1 Int) (y1 Int)) (=> (<= x1 y1) (<= (g x1) (g y1))))",
        ]
    );
}

#[test]
fn interpreted_symbols_are_rejected() {
    let h = FunctionSymbol::interpreted("h", vec![Sort::INT], Sort::INT);
    let mut m = MonotonicitySpec::new();
    assert!(m.insert(&h, [1], []).is_err());
}

#[test]
fn eager_lemmas_match_worked_example() {
    let ex = example();
    let enc = encode_eager(&ex.phi, &ex.spec_m(), unfolded()).unwrap();
    assert_eq!(enc.lemma_count, 4);
    assert_eq!(
        strings(&enc.assertions[3..]),
        [
            "(=> (and (<= c1 (+ c1 5)) (<= 0 2)) (<= (f c1 2) (f (+ c1 5) 0)))",
            "(=> (and (<= (+ c1 5) c1) (<= 2 0)) (<= (f (+ c1 5) 0) (f c1 2)))",
            "(=> (<= c2 4) (<= (g c2) (g 4)))",
            "(=> (<= 4 c2) (<= (g 4) (g c2)))",
        ]
    );
    assert!(enc.formula().is_quantifier_free());

    let folded = encode_eager(&ex.phi, &ex.spec_m(), EncodeOptions::default()).unwrap();
    assert_eq!(folded.lemma_count, 4);
    assert_eq!(
        strings(&folded.assertions[3..]),
        [
            "(=> (<= c1 (+ c1 5)) (<= (f c1 2) (f (+ c1 5) 0)))",
            "(=> (<= c2 4) (<= (g c2) (g 4)))",
            "(=> (<= 4 c2) (<= (g 4) (g c2)))",
        ]
    );
}

#[test]
fn eager_golden_scripts() {
    let ex = example();
    let enc = encode_eager(&ex.phi, &ex.spec_m(), unfolded()).unwrap();
    assert_eq!(
        emit_script(&enc.assertions),
        include_str!("golden/example_eager.smt2")
    );
    let enc = encode_eager(&ex.phi, &ex.spec_m(), EncodeOptions::default()).unwrap();
    assert_eq!(
        emit_script(&enc.assertions),
        include_str!("golden/example_eager_folded.smt2")
    );
}

#[test]
fn lemmas_under_relaxed_spec_are_vacuous() {
    let ex = example();
    let t = ArgVector::new(vec![ex.c1.clone(), Term::int(2)]);
    let s = ArgVector::new(vec![
        Term::add(ex.c1.clone(), Term::int(5)).unwrap(),
        Term::int(0),
    ]);
    let lemma = monotonicity_lemma(&ex.f, &t, &s, &ex.spec_m_prime()).unwrap();
    assert_eq!(
        lemma.to_string(),
        "(=> (and (<= c1 (+ c1 5)) (= 2 0)) (<= (f c1 2) (f (+ c1 5) 0)))"
    );
    // True under arbitrary values of the applications.
    for fv in [-3, 0, 7] {
        for gv in [-1, 4] {
            let mut val = Valuation::new();
            val.insert(ex.c1.clone(), Value::Int(fv));
            val.insert(Term::apply(&ex.f, t.0.clone()).unwrap(), Value::Int(fv * 2));
            val.insert(Term::apply(&ex.f, s.0.clone()).unwrap(), Value::Int(gv));
            assert_eq!(
                monouf::model::eval_valuation(&lemma, &val),
                Ok(Value::Bool(true))
            );
        }
    }
    let folded = candidate_lemmas(&ex.phi, &ex.spec_m_prime(), true).unwrap();
    assert_eq!(folded.unfolded_count, 4);
    assert!(folded.lemmas.iter().all(|l| l.symbol.name() == "g"));
}

#[test]
fn reflexive_lemma() {
    let ex = example();
    let t = ArgVector::new(vec![ex.c1.clone(), Term::int(2)]);
    let lemma = monotonicity_lemma(&ex.f, &t, &t, &ex.spec_m()).unwrap();
    assert_eq!(
        lemma.to_string(),
        "(=> (and (<= c1 c1) (<= 2 2)) (<= (f c1 2) (f c1 2)))"
    );
}

#[test]
fn lemma_counts_follow_ordered_pairs() {
    let h = FunctionSymbol::new("h", vec![Sort::INT], Sort::INT);
    let apps: Vec<Term> = (0..3)
        .map(|i| Term::apply(&h, vec![Term::int(i)]).unwrap())
        .collect();
    let single = Term::eq(apps[0].clone(), Term::int(1)).unwrap();
    let triple = Term::and(
        apps.iter()
            .map(|a| Term::le(a.clone(), Term::int(9)).unwrap())
            .collect(),
    )
    .unwrap();
    let mut m = MonotonicitySpec::new();
    m.insert(&h, [1], []).unwrap();
    assert_eq!(
        encode_eager(&single, &m, unfolded()).unwrap().lemma_count,
        0
    );
    let enc = encode_eager(&triple, &m, unfolded()).unwrap();
    assert_eq!(enc.lemma_count, 6);
    assert_eq!(enc.lemmas.len(), 6);
}

#[test]
fn eager_rejects_quantified_input() {
    let ex = example();
    let x = monouf::Binder::new("x", Sort::INT);
    let q = Term::forall(vec![x.clone()], Term::le(x.var(), x.var()).unwrap()).unwrap();
    let phi = Term::and(vec![ex.phi.clone(), q]).unwrap();
    assert!(encode_eager(&phi, &ex.spec_m(), unfolded()).is_err());
}

fn example_valuation(
    ex: &common::Example,
    c1: i64,
    c2: i64,
    f: [i64; 2],
    g: [i64; 2],
) -> Valuation {
    let apps = monouf::term::application_terms(&ex.phi);
    let mut val = Valuation::new();
    val.insert(ex.c1.clone(), Value::Int(c1));
    val.insert(ex.c2.clone(), Value::Int(c2));
    for a in apps {
        let s = a.to_string();
        let v = match s.as_str() {
            "(f c1 2)" => f[0],
            "(f (+ c1 5) 0)" => f[1],
            "(g c2)" => g[0],
            "(g 4)" => g[1],
            other => panic!("unexpected application {other}"),
        };
        val.insert(a, Value::Int(v));
    }
    val
}

#[test]
fn no_violations_in_worked_model() {
    let ex = example();
    let val = example_valuation(&ex, 6, 0, [4, 0], [1, 2]);
    assert!(violated_lemmas(&ex.phi, &ex.spec_m_prime(), &val)
        .unwrap()
        .is_empty());
    // The same values break f's anti-monotonicity in its second argument.
    let v = violated_lemmas(&ex.phi, &ex.spec_m(), &val).unwrap();
    assert_eq!(
        strings(&v),
        ["(=> (<= c1 (+ c1 5)) (<= (f c1 2) (f (+ c1 5) 0)))"]
    );
}

#[test]
fn constant_valuation_violates_nothing() {
    let ex = example();
    let val = example_valuation(&ex, 1, 3, [3, 3], [3, 3]);
    assert!(violated_lemmas(&ex.phi, &ex.spec_m(), &val)
        .unwrap()
        .is_empty());
}

#[test]
fn decreasing_g_is_caught() {
    let g = FunctionSymbol::new("g", vec![Sort::INT], Sort::INT);
    let c2 = Term::constant("c2", Sort::INT);
    let gc = Term::apply(&g, vec![c2.clone()]).unwrap();
    let g4 = Term::apply(&g, vec![Term::int(4)]).unwrap();
    let phi = Term::and(vec![
        Term::eq(gc.clone(), Term::int(5)).unwrap(),
        Term::eq(g4.clone(), Term::int(1)).unwrap(),
    ])
    .unwrap();
    let mut m = MonotonicitySpec::new();
    m.insert(&g, [1], []).unwrap();
    let val: Valuation = [
        (c2, Value::Int(0)),
        (gc, Value::Int(5)),
        (g4, Value::Int(1)),
    ]
    .into_iter()
    .collect();
    let v = violated_lemmas(&phi, &m, &val).unwrap();
    assert_eq!(strings(&v), ["(=> (<= c2 4) (<= (g c2) (g 4)))"]);
}

#[test]
fn missing_valuation_is_an_error() {
    let ex = example();
    let mut val = example_valuation(&ex, 6, 0, [4, 0], [1, 2]);
    val.remove(&ex.c2);
    assert!(violated_lemmas(&ex.phi, &ex.spec_m(), &val).is_err());
}

fn table(points: &[(&[i64], i64)]) -> FunctionTable {
    let mut t = FunctionTable::new(Value::Int(0));
    for (p, v) in points {
        t.points
            .insert(p.iter().map(|&i| Value::Int(i)).collect(), Value::Int(*v));
    }
    t
}

#[test]
fn monotonized_worked_model() {
    let ex = example();
    let mut base = Model::new();
    base.functions
        .insert("g".into(), table(&[(&[0], 1), (&[4], 2)]));
    base.functions
        .insert("f".into(), table(&[(&[6, 2], 4), (&[11, 0], 0)]));
    base.constants.insert("c1".into(), Value::Int(6));
    base.constants.insert("c2".into(), Value::Int(0));
    let up = monotonize_model(&base, &ex.spec_m_prime()).unwrap();
    for x in -20..20 {
        let want = if x >= 4 { 2 } else { 1 };
        assert_eq!(up.apply("g", &[Value::Int(x)]), Some(Value::Int(want)));
        for y in -3..4 {
            let want = if x >= 11 && y == 0 {
                0
            } else if x >= 6 && y == 2 {
                4
            } else {
                0
            };
            assert_eq!(
                up.apply("f", &[Value::Int(x), Value::Int(y)]),
                Some(Value::Int(want))
            );
        }
    }
    assert!(up.eval(&ex.phi).unwrap().as_bool().unwrap());
}

#[test]
fn monotonize_rejects_non_monotone_table() {
    let g = FunctionSymbol::new("g", vec![Sort::INT], Sort::INT);
    let mut m = MonotonicitySpec::new();
    m.insert(&g, [1], []).unwrap();
    let mut base = Model::new();
    base.functions
        .insert("g".into(), table(&[(&[0], 5), (&[4], 1)]));
    assert!(monotonize_model(&base, &m).is_err());
}

#[test]
fn empty_boolean_table_completes_to_false() {
    let p = FunctionSymbol::new("p", vec![Sort::BOOL], Sort::BOOL);
    let mut m = MonotonicitySpec::new();
    m.insert(&p, [1], []).unwrap();
    let up = monotonize_model(&Model::new(), &m).unwrap();
    for b in [false, true] {
        assert_eq!(up.apply("p", &[Value::Bool(b)]), Some(Value::Bool(false)));
    }
}

fn check(ex: &common::Example, spec: &MonotonicitySpec, expect_sat: bool) {
    let enc = encode_eager(&ex.phi, spec, EncodeOptions::default()).unwrap();
    let mut s = session(&enc.assertions);
    let verdict = solve_once(&mut s, &enc.assertions, &ex.phi).unwrap();
    assert_eq!(verdict.is_sat(), expect_sat, "eager: {verdict:?}");
    if let SolverVerdict::Sat(model) = &verdict {
        for a in &enc.assertions {
            assert!(model.eval_bool(a).unwrap(), "model falsifies {a}");
        }
        let up = monotonize_model(model, spec).unwrap();
        assert!(up.eval(&ex.phi).unwrap().as_bool().unwrap());
    }

    let mut s = session(std::slice::from_ref(&ex.phi));
    let out: LazyOutcome = solve_lazy(&ex.phi, spec, &mut s, EncodeOptions::default()).unwrap();
    assert_eq!(out.verdict.is_sat(), expect_sat, "lazy: {:?}", out.verdict);
    assert!(out.check_sat_calls <= out.candidate_count + 1);

    for enc in [
        encode_quant_individual(&ex.phi, spec).unwrap(),
        encode_quant_aggregated(&ex.phi, spec).unwrap(),
    ] {
        let mut s = session(&enc.assertions);
        for a in &enc.assertions {
            s.assert_formula(a).unwrap();
        }
        let r = s.check_sat().unwrap();
        let opposite = if expect_sat {
            monouf::smt::SatResult::Unsat
        } else {
            monouf::smt::SatResult::Sat
        };
        assert_ne!(r, opposite, "{}", enc.strategy);
    }
}

#[test]
fn worked_example_with_solver() {
    let ex = example();
    check(&ex, &ex.spec_m(), false);
    check(&ex, &ex.spec_m_prime(), true);
}

#[test]
fn lazy_without_constraints_checks_once() {
    let ex = example();
    let mut m = MonotonicitySpec::new();
    m.insert(&ex.f, [], []).unwrap();
    let mut s = session(std::slice::from_ref(&ex.phi));
    let out = solve_lazy(&ex.phi, &m, &mut s, EncodeOptions::default()).unwrap();
    assert!(out.verdict.is_sat());
    assert_eq!(out.check_sat_calls, 1);
    assert!(out.asserted.is_empty());
}

#[test]
fn lazy_lemmas_come_from_eager_set() {
    let ex = example();
    for spec in [ex.spec_m(), ex.spec_m_prime()] {
        let eager = encode_eager(&ex.phi, &spec, EncodeOptions::default()).unwrap();
        let mut s = session(std::slice::from_ref(&ex.phi));
        let out = solve_lazy(&ex.phi, &spec, &mut s, EncodeOptions::default()).unwrap();
        for l in &out.asserted {
            assert!(eager.lemmas.contains(l));
        }
    }
}

fn grid(arity: usize) -> Vec<Vec<Value>> {
    vec![(0..4).map(Value::Int).collect(); arity]
}

proptest! {
    #[test]
    fn completion_is_monotone_and_extends_table(
        dirs in proptest::collection::vec(0u8..3, 1..4),
        weights in proptest::collection::vec(0i64..3, 3),
        keep in proptest::collection::vec(any::<bool>(), 64),
    ) {
        let arity = dirs.len();
        let mut spec = ArgSpec::default();
        for (i, d) in dirs.iter().enumerate() {
            match d {
                0 => { spec.monotone.insert(i + 1); }
                1 => { spec.anti.insert(i + 1); }
                _ => {}
            }
        }
        // A function monotone per `spec`; free arguments enter through parity.
        let h = |x: &[Value]| -> i64 {
            x.iter().enumerate().map(|(i, v)| {
                let v = v.as_int().unwrap();
                match dirs[i] {
                    0 => weights[i] * v,
                    1 => weights[i] * (3 - v),
                    _ => (v % 2) * weights[i],
                }
            }).sum()
        };
        let sym = FunctionSymbol::new("h", vec![Sort::bounded_int(0, 3).unwrap(); arity], Sort::INT);
        let mut m = MonotonicitySpec::new();
        m.insert(&sym, spec.monotone.clone(), spec.anti.clone()).unwrap();
        let mut base = Model::new();
        let mut t = FunctionTable::new(Value::Int(0));
        let mut k = 0;
        for_each_point::<()>(&grid(arity), &mut |x| {
            if keep[k % keep.len()] {
                t.points.insert(x.to_vec(), Value::Int(h(x)));
            }
            k += 1;
            Ok(true)
        }).unwrap();
        // Free arguments may break monotonicity of `h`; keep only points
        // where the table is consistent.
        let pts: Vec<_> = t.points.clone().into_iter().collect();
        t.points.retain(|p, v| pts.iter().all(|(q, w)| {
            (!dominated(&spec, p, q) || *v <= *w) && (!dominated(&spec, q, p) || *w <= *v)
        }));
        let table_points: BTreeMap<_, _> = t.points.clone();
        base.functions.insert("h".into(), t);
        let up = monotonize_model(&base, &m).unwrap();
        let mut values = BTreeMap::new();
        for_each_point::<()>(&grid(arity), &mut |x| {
            values.insert(x.to_vec(), up.apply("h", x).unwrap());
            Ok(true)
        }).unwrap();
        for (p, vp) in &values {
            for (q, vq) in &values {
                if dominated(&spec, p, q) {
                    prop_assert!(vp <= vq, "{p:?} ⪯ {q:?} but {vp} > {vq}");
                }
            }
        }
        for (p, v) in &table_points {
            prop_assert_eq!(values[p], *v);
        }
    }
}
