//! Turning a model whose tables only respect monotonicity at their own
//! points into one that is monotone everywhere.
//!
//! For a constrained symbol with table `A_f`, the completion is
//! `f↑(x) = max { A_f(p) | p ⪯ x }`, or the least table output when no
//! point is below `x`. Here `p ⪯ x` compares monotone positions with `≤`,
//! anti-monotone positions with `≥`, and requires equality elsewhere.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{eval_with, EvalError, FunctionTable, Model, Value};
use crate::spec::{ArgSpec, Direction, MonotonicitySpec};
use crate::term::{Name, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonotonizeError {
    #[error("table of `{symbol}` is not monotone: {lhs:?} ⪯ {rhs:?} but {out_lhs} > {out_rhs}")]
    Violation {
        symbol: String,
        lhs: Vec<Value>,
        rhs: Vec<Value>,
        out_lhs: Value,
        out_rhs: Value,
    },
}

/// `p ⪯ q` under `spec`.
pub fn dominated(spec: &ArgSpec, p: &[Value], q: &[Value]) -> bool {
    p.len() == q.len()
        && p.iter()
            .zip(q)
            .enumerate()
            .all(|(i, (a, b))| match spec.direction(i + 1) {
                Direction::Monotone => a <= b,
                Direction::AntiMonotone => a >= b,
                Direction::Free => a == b,
            })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoFunction {
    pub arg_spec: ArgSpec,
    pub points: Vec<(Vec<Value>, Value)>,
    pub default: Value,
}

impl MonoFunction {
    pub fn apply(&self, args: &[Value]) -> Value {
        self.points
            .iter()
            .filter(|(p, _)| dominated(&self.arg_spec, p, args))
            .map(|(_, v)| *v)
            .max()
            .unwrap_or(self.default)
    }

    /// Tabulates over a finite grid.
    pub fn tabulate(&self, domains: &[Vec<Value>]) -> FunctionTable {
        let mut table = FunctionTable::new(self.default);
        crate::model::for_each_point::<()>(domains, &mut |x| {
            table.points.insert(x.to_vec(), self.apply(x));
            Ok(true)
        })
        .expect("infallible");
        table
    }
}

/// A base model with monotone completions of its constrained symbols.
#[derive(Debug, Clone)]
pub struct MonotoneModel {
    pub base: Model,
    pub completed: BTreeMap<Name, MonoFunction>,
}

impl MonotoneModel {
    /// Interpretation of `name` at `args`: the completion for constrained
    /// symbols, the base table otherwise.
    pub fn apply(&self, name: &str, args: &[Value]) -> Option<Value> {
        if let Some(f) = self.completed.get(name) {
            return Some(f.apply(args));
        }
        self.base.functions.get(name).map(|t| t.apply(args))
    }

    pub fn eval(&self, term: &Term) -> Result<Value, EvalError> {
        eval_with(
            term,
            &mut |t| match t.kind() {
                TermKind::Const(name, _) => Some(
                    self.base
                        .constants
                        .get(name)
                        .copied()
                        .ok_or_else(|| EvalError::UnknownConstant(name.to_string())),
                ),
                _ => None,
            },
            &mut |f, args| {
                self.apply(f, args)
                    .ok_or_else(|| EvalError::UnknownFunction(f.to_string()))
            },
        )
    }
}

/// Completes every constrained symbol of `spec`. Fails if a base table
/// already breaks monotonicity between two of its own points.
pub fn monotonize_model(
    base: &Model,
    spec: &MonotonicitySpec,
) -> Result<MonotoneModel, MonotonizeError> {
    let mut completed = BTreeMap::new();
    for (f, arg_spec) in spec.constrained() {
        let points: Vec<(Vec<Value>, Value)> = base
            .functions
            .get(f.name())
            .map(|t| t.points.iter().map(|(k, v)| (k.clone(), *v)).collect())
            .unwrap_or_default();
        for (p, vp) in &points {
            for (q, vq) in &points {
                if vp > vq && dominated(arg_spec, p, q) {
                    return Err(MonotonizeError::Violation {
                        symbol: f.name().to_string(),
                        lhs: p.clone(),
                        rhs: q.clone(),
                        out_lhs: *vp,
                        out_rhs: *vq,
                    });
                }
            }
        }
        let default = points
            .iter()
            .map(|(_, v)| *v)
            .min()
            .unwrap_or_else(|| Value::domain_min(&f.result_sort()));
        completed.insert(
            f.name_rc().clone(),
            MonoFunction {
                arg_spec: arg_spec.clone(),
                points,
                default,
            },
        );
    }
    Ok(MonotoneModel {
        base: base.clone(),
        completed,
    })
}
