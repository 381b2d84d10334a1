mod common;

use common::solver;
use monouf::generate::{generate_instance, GenParams, Mode};
use monouf::infer::{
    decode_solution, find_fixed_point, solve_inference, verify_solution, InferOptions, Verification,
};
use monouf::oracle::{oracle_inference, OracleError, DEFAULT_BUDGET};
use monouf::problem_file::{parse_problem, write_problem};
use monouf::{SolverVerdict, Strategy};
use proptest::prelude::*;

fn tiny(mode: Mode, domain_size: usize) -> GenParams {
    GenParams {
        n_vars: 3,
        max_arity: 2,
        domain_size,
        n_observations: 2,
        observed_ratio: 0.7,
        mode,
        ..GenParams::default()
    }
}

#[test]
fn same_seed_same_bytes() {
    let p = GenParams::default();
    let a = write_problem(&generate_instance(1, &p).unwrap().problem);
    let b = write_problem(&generate_instance(1, &p).unwrap().problem);
    assert_eq!(a, b);
    let c = write_problem(&generate_instance(2, &p).unwrap().problem);
    assert_ne!(a, c);
    assert_eq!(write_problem(&parse_problem(&a).unwrap()), a);
}

#[test]
fn perturbation_changes_exactly_one_value() {
    for seed in 0..20 {
        let g = generate_instance(seed, &tiny(Mode::Perturbed, 3)).unwrap();
        let d = g.perturbation.clone().unwrap();
        let obs = &g.problem.observations()[d.observation];
        assert_ne!(d.planted, d.flipped);
        assert_eq!(obs.assignments[&d.variable], d.flipped);
        assert_eq!(g.planted_states[d.observation][d.variable], d.planted);
        let planted = generate_instance(seed, &tiny(Mode::Planted, 3)).unwrap();
        assert!(planted.perturbation.is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ground_truth_explains_planted_instances(
        seed in any::<u64>(),
        n_vars in 1usize..12,
        max_arity in 0usize..5,
        domain_size in 2usize..5,
        n_observations in 0usize..5,
        sign_ratio in 0.0f64..=1.0,
        essential_ratio in 0.0f64..=1.0,
        observed_ratio in 0.0f64..=1.0,
    ) {
        let params = GenParams {
            n_vars, max_arity, domain_size, sign_ratio, essential_ratio,
            n_observations, observed_ratio, mode: Mode::Planted,
        };
        let g = generate_instance(seed, &params).unwrap();
        let p = &g.problem;
        prop_assert_eq!(p.variables().len(), n_vars);
        prop_assert_eq!(p.observations().len(), n_observations);
        prop_assert!(p.variables().iter().all(|v| p.regulators(p.variable_index(v.name()).unwrap()).len() <= max_arity));
        prop_assert_eq!(verify_solution(p, &g.ground_truth).unwrap(), Verification::Pass);
        for (obs, state) in p.observations().iter().zip(&g.planted_states) {
            for (&i, v) in &obs.assignments {
                prop_assert_eq!(state[i], *v);
            }
            for t in &g.ground_truth {
                prop_assert_eq!(t.next(state), state[t.target]);
            }
        }
        let next = |v: usize, s: &[monouf::Value]| g.ground_truth[v].next(s);
        for obs in p.observations() {
            prop_assert!(find_fixed_point(p, obs, &next).unwrap().is_some());
        }
    }
}

#[test]
fn planted_instances_are_sat_under_eager() {
    let solver = solver();
    for seed in 0..20 {
        let g = generate_instance(
            seed,
            &GenParams {
                n_vars: 6,
                max_arity: 3,
                ..GenParams::default()
            },
        )
        .unwrap();
        let run = solve_inference(
            &g.problem,
            Strategy::InstEager,
            &solver,
            None,
            InferOptions::default(),
        )
        .unwrap();
        let SolverVerdict::Sat(model) = run.verdict else {
            panic!("seed {seed}: {:?}", run.verdict);
        };
        let tables = decode_solution(&model, &g.problem).unwrap();
        assert!(verify_solution(&g.problem, &tables).unwrap().is_pass());
    }
}

#[test]
fn perturbed_tiny_instances_agree_with_oracle() {
    let solver = solver();
    let mut unsat = 0;
    for seed in 0..30 {
        let domain = if seed % 3 == 0 { 3 } else { 2 };
        let g = generate_instance(seed, &tiny(Mode::Perturbed, domain)).unwrap();
        let expected = match oracle_inference(&g.problem, DEFAULT_BUDGET) {
            Ok(v) => v.is_sat(),
            Err(OracleError::Budget { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        unsat += usize::from(!expected);
        for strategy in [Strategy::InstEager, Strategy::InstLazy] {
            let run = solve_inference(&g.problem, strategy, &solver, None, InferOptions::default())
                .unwrap();
            assert!(!matches!(run.verdict, SolverVerdict::Unknown(_)));
            assert_eq!(run.verdict.is_sat(), expected, "seed {seed}, {strategy}");
        }
    }
    assert!(unsat > 0, "no perturbed instance was unsatisfiable");
}
