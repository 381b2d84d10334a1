//! Seeded random inference instances with a planted monotone ground truth.
//!
//! Planted mode first fixes the influence graph and one direction per
//! regulation, then samples the states that will be observed and finally
//! builds monotone tables that have those states as fixed points. Every
//! observation is therefore a real fixed point of the ground truth and the
//! instance is satisfiable. Perturbed mode flips one observed value.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::infer::{
    build_signature, FixedPointObservation, InferError, InferenceProblem, NetworkVariable,
    Regulation, Sign, UpdateFunctionTable,
};
use crate::model::Value;

/// Largest table a generated update function may have.
pub const MAX_TABLE_ROWS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("parameter `{name}` = {value} is outside {range}")]
    Param {
        name: &'static str,
        value: String,
        range: String,
    },
    #[error(transparent)]
    Infer(#[from] InferError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Planted,
    Perturbed,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Planted => "planted",
            Mode::Perturbed => "perturbed",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "planted" => Ok(Mode::Planted),
            "perturbed" => Ok(Mode::Perturbed),
            _ => Err(format!("unknown mode `{s}`; expected planted or perturbed")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    /// 1..=512.
    pub n_vars: usize,
    /// Each variable gets between 0 and `max_arity` regulators (capped at
    /// `n_vars`). `domain_size^max_arity` must not exceed [`MAX_TABLE_ROWS`].
    pub max_arity: usize,
    /// 2 gives Boolean variables, larger values the levels `0..domain_size`.
    pub domain_size: usize,
    /// Probability that a regulation's sign is published.
    pub sign_ratio: f64,
    /// Probability that a regulation the ground truth depends on is marked
    /// essential. Independent regulations are never marked.
    pub essential_ratio: f64,
    /// 0..=64; perturbed mode needs at least one.
    pub n_observations: usize,
    /// Probability that a variable is listed in an observation. Each
    /// observation lists at least one variable.
    pub observed_ratio: f64,
    pub mode: Mode,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_vars: 5,
            max_arity: 3,
            domain_size: 2,
            sign_ratio: 0.7,
            essential_ratio: 0.5,
            n_observations: 2,
            observed_ratio: 1.0,
            mode: Mode::Planted,
        }
    }
}

fn param_err(name: &'static str, value: impl ToString, range: impl ToString) -> GenerateError {
    GenerateError::Param {
        name,
        value: value.to_string(),
        range: range.to_string(),
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenerateError> {
        if !(1..=512).contains(&self.n_vars) {
            return Err(param_err("n_vars", self.n_vars, "1..=512"));
        }
        if !(2..=16).contains(&self.domain_size) {
            return Err(param_err("domain_size", self.domain_size, "2..=16"));
        }
        let rows = (self.domain_size as u64).checked_pow(self.max_arity as u32);
        if self.max_arity > 16 || rows.is_none_or(|r| r > MAX_TABLE_ROWS) {
            return Err(param_err(
                "max_arity",
                self.max_arity,
                format!("0..=16 with domain_size^max_arity <= {MAX_TABLE_ROWS}"),
            ));
        }
        for (name, r) in [
            ("sign_ratio", self.sign_ratio),
            ("essential_ratio", self.essential_ratio),
            ("observed_ratio", self.observed_ratio),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(param_err(name, r, "[0, 1]"));
            }
        }
        let min_obs = usize::from(self.mode == Mode::Perturbed);
        if !(min_obs..=64).contains(&self.n_observations) {
            return Err(param_err(
                "n_observations",
                self.n_observations,
                format!("{min_obs}..=64 in {} mode", self.mode),
            ));
        }
        Ok(())
    }
}

/// The observed value that perturbed mode changed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub observation: usize,
    pub variable: usize,
    pub planted: Value,
    pub flipped: Value,
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub problem: InferenceProblem,
    /// The planted update functions, one per variable.
    pub ground_truth: Vec<UpdateFunctionTable>,
    /// The full fixed point behind each observation.
    pub planted_states: Vec<Vec<Value>>,
    pub perturbation: Option<Perturbation>,
}

/// Monotone in position `i` when `up[i]`, anti-monotone otherwise.
fn below(up: &[bool], p: &[u8], q: &[u8]) -> bool {
    p.iter()
        .zip(q)
        .zip(up)
        .all(|((a, b), &u)| if u { a <= b } else { a >= b })
}

/// `max { out | (p, out) in points, p below x }`, 0 if none.
fn eval_points(up: &[bool], points: &[(Vec<u8>, u8)], x: &[u8]) -> u8 {
    points
        .iter()
        .filter(|(p, _)| below(up, p, x))
        .map(|(_, o)| *o)
        .max()
        .unwrap_or(0)
}

struct Node {
    regulators: Vec<usize>,
    up: Vec<bool>,
    sign: Vec<Sign>,
}

pub fn generate_instance(
    seed: u64,
    params: &GenParams,
) -> Result<GeneratedInstance, GenerateError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n_vars;
    let d = params.domain_size as u8;

    let nodes: Vec<Node> = (0..n)
        .map(|_| {
            let k = rng.gen_range(0..=params.max_arity.min(n));
            let mut regulators = sample(&mut rng, n, k).into_vec();
            regulators.sort_unstable();
            let mut up = Vec::with_capacity(k);
            let mut sign = Vec::with_capacity(k);
            for _ in 0..k {
                let u = rng.gen_bool(0.5);
                up.push(u);
                sign.push(if rng.gen_bool(params.sign_ratio) {
                    if u {
                        Sign::Monotone
                    } else {
                        Sign::AntiMonotone
                    }
                } else {
                    Sign::Unknown
                });
            }
            Node {
                regulators,
                up,
                sign,
            }
        })
        .collect();
    let project =
        |v: usize, s: &[u8]| -> Vec<u8> { nodes[v].regulators.iter().map(|&r| s[r]).collect() };

    // States to plant, kept pairwise consistent with every node's directions.
    // When no fresh consistent state turns up, an earlier one is reused.
    let mut states: Vec<Vec<u8>> = Vec::with_capacity(params.n_observations);
    for _ in 0..params.n_observations {
        let mut accepted = None;
        for _ in 0..64 {
            let s: Vec<u8> = (0..n).map(|_| rng.gen_range(0..d)).collect();
            let ok = states.iter().all(|t| {
                (0..n).all(|v| {
                    let (ps, pt) = (project(v, &s), project(v, t));
                    let up = &nodes[v].up;
                    !(below(up, &ps, &pt) && s[v] > t[v]) && !(below(up, &pt, &ps) && t[v] > s[v])
                })
            });
            if ok {
                accepted = Some(s);
                break;
            }
        }
        let s = match accepted {
            Some(s) => s,
            None if !states.is_empty() => states[rng.gen_range(0..states.len())].clone(),
            // The first state is always consistent.
            None => unreachable!(),
        };
        states.push(s);
    }

    let mut raw_tables: Vec<BTreeMap<Vec<u8>, u8>> = Vec::with_capacity(n);
    for (v, node) in nodes.iter().enumerate() {
        let k = node.regulators.len();
        let m = rng.gen_range(1..=2 * k + 1);
        let forced: Vec<(Vec<u8>, u8)> = states.iter().map(|s| (project(v, s), s[v])).collect();
        let mut points: Vec<(Vec<u8>, u8)> = (0..m)
            .map(|_| {
                (
                    (0..k).map(|_| rng.gen_range(0..d)).collect(),
                    rng.gen_range(0..d),
                )
            })
            .filter(|(p, o): &(Vec<u8>, u8)| {
                forced
                    .iter()
                    .all(|(q, vq)| !(below(&node.up, p, q) && o > vq))
            })
            .collect();
        points.extend(forced);
        let mut table = BTreeMap::new();
        let mut cursor = vec![0u8; k];
        // Odometer over `0..d` per position; wraps back to all zeros.
        loop {
            table.insert(cursor.clone(), eval_points(&node.up, &points, &cursor));
            for c in cursor.iter_mut().rev() {
                *c += 1;
                if *c < d {
                    break;
                }
                *c = 0;
            }
            if cursor.iter().all(|&c| c == 0) {
                break;
            }
        }
        raw_tables.push(table);
    }

    let depends = |v: usize, i: usize| -> bool {
        raw_tables[v].iter().any(|(x, o)| {
            x[i] + 1 < d && {
                let mut y = x.clone();
                y[i] += 1;
                raw_tables[v][&y] != *o
            }
        })
    };
    let mut regulations = Vec::new();
    for (v, node) in nodes.iter().enumerate() {
        for (i, &r) in node.regulators.iter().enumerate() {
            let essential = depends(v, i) && rng.gen_bool(params.essential_ratio);
            regulations.push(Regulation {
                source: r,
                target: v,
                sign: node.sign[i],
                essential,
            });
        }
    }

    let boolean = d == 2;
    let value = |x: u8| {
        if boolean {
            Value::Bool(x == 1)
        } else {
            Value::Int(x as i64)
        }
    };
    let variables = (0..n)
        .map(|i| {
            let name = format!("v{i}");
            if boolean {
                Ok(NetworkVariable::boolean(name))
            } else {
                NetworkVariable::leveled(name, d as i64 - 1)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut observations = Vec::with_capacity(states.len());
    for (j, s) in states.iter().enumerate() {
        let mut assignments: BTreeMap<usize, Value> = (0..n)
            .filter(|_| rng.gen_bool(params.observed_ratio))
            .map(|i| (i, value(s[i])))
            .collect();
        if assignments.is_empty() {
            let i = rng.gen_range(0..n);
            assignments.insert(i, value(s[i]));
        }
        observations.push(FixedPointObservation {
            name: format!("F{}", j + 1),
            assignments,
        });
    }

    let perturbation = match params.mode {
        Mode::Planted => None,
        Mode::Perturbed => {
            let j = rng.gen_range(0..observations.len());
            let obs = &mut observations[j];
            let keys: Vec<usize> = obs.assignments.keys().copied().collect();
            let variable = keys[rng.gen_range(0..keys.len())];
            let old = states[j][variable];
            let new = (old + rng.gen_range(1..d)) % d;
            obs.assignments.insert(variable, value(new));
            Some(Perturbation {
                observation: j,
                variable,
                planted: value(old),
                flipped: value(new),
            })
        }
    };

    let problem = InferenceProblem::new(variables, regulations, observations)?;
    let sig = build_signature(&problem);
    let ground_truth = raw_tables
        .iter()
        .enumerate()
        .map(|(v, t)| UpdateFunctionTable {
            target: v,
            symbol: sig.symbol(v).clone(),
            regulators: nodes[v].regulators.clone(),
            rows: t
                .iter()
                .map(|(x, o)| (x.iter().map(|&c| value(c)).collect(), value(*o)))
                .collect(),
        })
        .collect();
    let planted_states = states
        .iter()
        .map(|s| s.iter().map(|&c| value(c)).collect())
        .collect();
    Ok(GeneratedInstance {
        problem,
        ground_truth,
        planted_states,
        perturbation,
    })
}
