//! Complete update tables: decoding solver models into them and checking
//! them independently of any encoding.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::encode::monotonize_model;
use crate::infer::encode::{build_monotonicity_spec, build_signature};
use crate::infer::problem::{FixedPointObservation, InferenceProblem, Sign};
use crate::infer::InferError;
use crate::model::{for_each_point, Model, Value};
use crate::term::FunctionSymbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateFunctionTable {
    pub target: usize,
    pub symbol: Arc<FunctionSymbol>,
    pub regulators: Vec<usize>,
    /// One row per point of the regulators' product domain.
    pub rows: BTreeMap<Vec<Value>, Value>,
}

impl UpdateFunctionTable {
    /// Output for a full network state.
    pub fn next(&self, state: &[Value]) -> Value {
        let key: Vec<Value> = self.regulators.iter().map(|&r| state[r]).collect();
        self.rows[&key]
    }
}

fn domains(p: &InferenceProblem, vars: &[usize]) -> Result<Vec<Vec<Value>>, InferError> {
    vars.iter()
        .map(|&i| {
            let v = &p.variables()[i];
            v.values()
                .ok_or_else(|| InferError::Unbounded(v.name().to_string()))
        })
        .collect()
}

/// Completes a model of the inference encoding into one table per variable.
/// Constrained symbols are monotonized; the others take their table value at
/// evaluated points and the least evaluated output elsewhere.
pub fn decode_solution(
    model: &Model,
    p: &InferenceProblem,
) -> Result<Vec<UpdateFunctionTable>, InferError> {
    if let Some(v) = p.variables().iter().find(|v| !v.is_bounded()) {
        return Err(InferError::Unbounded(v.name().to_string()));
    }
    let sig = build_signature(p);
    let spec = build_monotonicity_spec(p, &sig);
    let up = monotonize_model(model, &spec)?;
    let mut tables = Vec::with_capacity(sig.symbols.len());
    for (t, f) in sig.symbols.iter().enumerate() {
        let grid = domains(p, &sig.regulators[t])?;
        let fallback = Value::domain_min(&f.result_sort());
        let mut rows = BTreeMap::new();
        for_each_point::<()>(&grid, &mut |x| {
            let out = up.apply(f.name(), x).unwrap_or(fallback);
            rows.insert(x.to_vec(), out);
            Ok(true)
        })
        .unwrap();
        tables.push(UpdateFunctionTable {
            target: t,
            symbol: f.clone(),
            regulators: sig.regulators[t].clone(),
            rows,
        });
    }
    Ok(tables)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `lower` and `upper` differ in one step of the source's value.
    NotMonotone {
        target: String,
        source: String,
        sign: Sign,
        lower: Vec<Value>,
        upper: Vec<Value>,
    },
    NotEssential {
        target: String,
        source: String,
    },
    NoFixedPoint {
        observation: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Value]| v.iter().map(Value::to_string).collect::<Vec<_>>().join(",");
        match self {
            Violation::NotMonotone {
                target,
                source,
                sign,
                lower,
                upper,
            } => write!(
                f,
                "f_{target} is not {sign} in {source}: rows ({}) and ({})",
                show(lower),
                show(upper)
            ),
            Violation::NotEssential { target, source } => {
                write!(
                    f,
                    "f_{target} does not depend on essential regulator {source}"
                )
            }
            Violation::NoFixedPoint { observation } => {
                write!(
                    f,
                    "observation `{observation}` does not extend to a fixed point"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Pass,
    Fail(Violation),
}

impl Verification {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verification::Pass)
    }
}

fn check_shape(p: &InferenceProblem, tables: &[UpdateFunctionTable]) -> Result<(), InferError> {
    if tables.len() != p.variables().len() {
        return Err(InferError::TableMismatch(format!(
            "{} tables for {} variables",
            tables.len(),
            p.variables().len()
        )));
    }
    for (i, t) in tables.iter().enumerate() {
        let name = p.variables()[i].name();
        if t.target != i || t.regulators != p.regulators(i) {
            return Err(InferError::TableMismatch(format!(
                "table {i} does not match the regulators of `{name}`"
            )));
        }
        let grid = domains(p, &t.regulators)?;
        let expected: usize = grid.iter().map(Vec::len).product();
        if t.rows.len() != expected {
            return Err(InferError::TableMismatch(format!(
                "table of `{name}` has {} rows, expected {expected}",
                t.rows.len()
            )));
        }
        let target_sort = p.variables()[i].domain();
        for (k, out) in &t.rows {
            let in_grid = k.len() == grid.len() && k.iter().zip(&grid).all(|(x, d)| d.contains(x));
            if !in_grid || !out.in_domain(&target_sort) {
                return Err(InferError::TableMismatch(format!(
                    "table of `{name}` has a row outside its domain"
                )));
            }
        }
    }
    Ok(())
}

/// Checks signs over the full grid, essentiality, and that every
/// observation extends to a fixed point. Reports the first violation.
pub fn verify_solution(
    p: &InferenceProblem,
    tables: &[UpdateFunctionTable],
) -> Result<Verification, InferError> {
    check_shape(p, tables)?;
    let name = |i: usize| p.variables()[i].name().to_string();
    for t in tables {
        let grid = domains(p, &t.regulators)?;
        for (k, &source) in t.regulators.iter().enumerate() {
            let reg = p.regulation(source, t.target).expect("regulator");
            let mut differs = false;
            // Adjacent steps in one coordinate suffice for both checks.
            for (row, &out) in &t.rows {
                let pos = grid[k].iter().position(|v| *v == row[k]).unwrap();
                let Some(&next) = grid[k].get(pos + 1) else {
                    continue;
                };
                let mut upper = row.clone();
                upper[k] = next;
                let up_out = t.rows[&upper];
                differs |= out != up_out;
                let bad = match reg.sign {
                    Sign::Monotone => out > up_out,
                    Sign::AntiMonotone => out < up_out,
                    Sign::Unknown => false,
                };
                if bad {
                    return Ok(Verification::Fail(Violation::NotMonotone {
                        target: name(t.target),
                        source: name(source),
                        sign: reg.sign,
                        lower: row.clone(),
                        upper,
                    }));
                }
            }
            if reg.essential && !differs {
                return Ok(Verification::Fail(Violation::NotEssential {
                    target: name(t.target),
                    source: name(source),
                }));
            }
        }
    }
    for obs in p.observations() {
        if find_fixed_point(p, obs, &|v, s| tables[v].next(s))?.is_none() {
            return Ok(Verification::Fail(Violation::NoFixedPoint {
                observation: obs.name.clone(),
            }));
        }
    }
    Ok(Verification::Pass)
}

/// A full state extending `obs` with `state[v] = next(v, state)` for every
/// variable, found by backtracking in variable order.
pub fn find_fixed_point(
    p: &InferenceProblem,
    obs: &FixedPointObservation,
    next: &dyn Fn(usize, &[Value]) -> Value,
) -> Result<Option<Vec<Value>>, InferError> {
    let n = p.variables().len();
    let doms = domains(p, &(0..n).collect::<Vec<_>>())?;
    // Variable v can be checked once everything it reads is assigned.
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let last = p.regulators(v).iter().copied().chain([v]).max().unwrap();
        ready[last].push(v);
    }
    let mut state: Vec<Value> = doms.iter().map(|d| d[0]).collect();
    fn go(
        depth: usize,
        state: &mut Vec<Value>,
        doms: &[Vec<Value>],
        ready: &[Vec<usize>],
        obs: &FixedPointObservation,
        next: &dyn Fn(usize, &[Value]) -> Value,
    ) -> bool {
        if depth == doms.len() {
            return true;
        }
        let choices: Vec<Value> = match obs.assignments.get(&depth) {
            Some(v) => vec![*v],
            None => doms[depth].clone(),
        };
        for c in choices {
            state[depth] = c;
            if ready[depth].iter().all(|&v| next(v, state) == state[v])
                && go(depth + 1, state, doms, ready, obs, next)
            {
                return true;
            }
        }
        false
    }
    Ok(go(0, &mut state, &doms, &ready, obs, next).then_some(state))
}
