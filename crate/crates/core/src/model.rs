//! Ground values, finite models, and the ground-term evaluator.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::term::{Name, Sort, SortKind, Term, TermKind};

/// A ground value. Booleans are ordered `false < true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Int(i64),
}

impl Value {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Int(_) => None,
        }
    }

    pub fn as_int(self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(i),
            Value::Bool(_) => None,
        }
    }

    pub fn has_sort(self, sort: &Sort) -> bool {
        matches!(
            (self, sort.kind()),
            (Value::Bool(_), SortKind::Bool) | (Value::Int(_), SortKind::Int)
        )
    }

    /// Whether the value lies in the domain of `sort`, bounds included.
    pub fn in_domain(self, sort: &Sort) -> bool {
        match (self, sort.bounds()) {
            (Value::Int(i), Some((lo, hi))) => lo <= i && i <= hi,
            _ => self.has_sort(sort),
        }
    }

    pub fn to_term(self) -> Term {
        match self {
            Value::Bool(b) => Term::bool(b),
            Value::Int(i) => Term::int(i),
        }
    }

    /// Smallest element of a domain: `false` for Booleans, the lower bound
    /// for bounded integers, 0 otherwise.
    pub fn domain_min(sort: &Sort) -> Value {
        match (sort.kind(), sort.bounds()) {
            (SortKind::Bool, _) => Value::Bool(false),
            (SortKind::Int, Some((lo, _))) => Value::Int(lo),
            (SortKind::Int, None) => Value::Int(0),
        }
    }

    /// All domain values in ascending order, when finite.
    pub fn domain(sort: &Sort) -> Option<Vec<Value>> {
        match (sort.kind(), sort.bounds()) {
            (SortKind::Bool, _) => Some(vec![Value::Bool(false), Value::Bool(true)]),
            (SortKind::Int, Some((lo, hi))) => Some((lo..=hi).map(Value::Int).collect()),
            (SortKind::Int, None) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
        }
    }
}

/// Finite function presentation: explicit points plus a default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub points: BTreeMap<Vec<Value>, Value>,
    pub default: Value,
}

impl FunctionTable {
    pub fn new(default: Value) -> Self {
        FunctionTable {
            points: BTreeMap::new(),
            default,
        }
    }

    pub fn apply(&self, args: &[Value]) -> Value {
        self.points.get(args).copied().unwrap_or(self.default)
    }
}

/// A finite model: constant values and function tables, keyed by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    pub constants: BTreeMap<Name, Value>,
    pub functions: BTreeMap<Name, FunctionTable>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value for constant `{0}`")]
    UnknownConstant(String),
    #[error("no interpretation for `{0}`")]
    UnknownFunction(String),
    #[error("no valuation for term {0}")]
    MissingValuation(String),
    #[error("free variable `{0}`")]
    FreeVariable(String),
    #[error("quantifier over unbounded sort in {0}")]
    UnboundedQuantifier(String),
    #[error("ill-sorted value in {0}")]
    IllSorted(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn eval(&self, term: &Term) -> Result<Value, EvalError> {
        eval_with(
            term,
            &mut |t| match t.kind() {
                TermKind::Const(name, _) => Some(
                    self.constants
                        .get(name)
                        .copied()
                        .ok_or_else(|| EvalError::UnknownConstant(name.to_string())),
                ),
                _ => None,
            },
            &mut |f, args| {
                self.functions
                    .get(f)
                    .map(|table| table.apply(args))
                    .ok_or_else(|| EvalError::UnknownFunction(f.to_string()))
            },
        )
    }

    pub fn eval_bool(&self, term: &Term) -> Result<bool, EvalError> {
        self.eval(term)?
            .as_bool()
            .ok_or_else(|| EvalError::IllSorted(term.to_string()))
    }

    /// Builds a model from values of constants and application terms,
    /// keying each application by the values of its arguments. A table's
    /// default is its least output.
    pub fn from_valuation(valuation: &Valuation) -> Result<Model, EvalError> {
        let mut model = Model::new();
        let mut apps: Vec<&Term> = Vec::new();
        for (t, v) in valuation {
            match t.kind() {
                TermKind::Const(name, _) => {
                    model.constants.insert(name.clone(), *v);
                }
                TermKind::Apply(..) => apps.push(t),
                _ => {}
            }
        }
        apps.sort_by_key(|t| (t.depth(), (*t).clone()));
        for app in apps {
            let TermKind::Apply(f, args) = app.kind() else {
                unreachable!()
            };
            let key = args
                .iter()
                .map(|a| eval_valuation(a, valuation))
                .collect::<Result<Vec<_>, _>>()?;
            let out = valuation[app];
            let table = model
                .functions
                .entry(f.name_rc().clone())
                .or_insert_with(|| FunctionTable::new(Value::domain_min(&f.result_sort())));
            table.points.insert(key, out);
        }
        for table in model.functions.values_mut() {
            if let Some(min) = table.points.values().min() {
                table.default = *min;
            }
        }
        Ok(model)
    }
}

/// Values for ground terms, as returned by solver value queries.
pub type Valuation = HashMap<Term, Value>;

/// Evaluates a ground term, looking compound nodes up in `valuation` first.
pub fn eval_valuation(term: &Term, valuation: &Valuation) -> Result<Value, EvalError> {
    eval_with(
        term,
        &mut |t| valuation.get(t).map(|v| Ok(*v)),
        &mut |_, _| Err(EvalError::MissingValuation(term.to_string())),
    )
    .map_err(|e| match e {
        EvalError::UnknownConstant(_) => EvalError::MissingValuation(term.to_string()),
        e => e,
    })
}

/// Generic evaluator. `lookup` may short-circuit any node (and must answer
/// for constants); `apply` interprets function symbols on argument values.
pub fn eval_with(
    term: &Term,
    lookup: &mut dyn FnMut(&Term) -> Option<Result<Value, EvalError>>,
    apply: &mut dyn FnMut(&str, &[Value]) -> Result<Value, EvalError>,
) -> Result<Value, EvalError> {
    let mut env: Vec<(Name, Value)> = Vec::new();
    eval_env(term, lookup, apply, &mut env)
}

fn eval_env(
    term: &Term,
    lookup: &mut dyn FnMut(&Term) -> Option<Result<Value, EvalError>>,
    apply: &mut dyn FnMut(&str, &[Value]) -> Result<Value, EvalError>,
    env: &mut Vec<(Name, Value)>,
) -> Result<Value, EvalError> {
    if let Some(v) = lookup(term) {
        return v;
    }
    let int = |v: Value, t: &Term| {
        v.as_int()
            .ok_or_else(|| EvalError::IllSorted(t.to_string()))
    };
    let boolean = |v: Value, t: &Term| {
        v.as_bool()
            .ok_or_else(|| EvalError::IllSorted(t.to_string()))
    };
    let overflow = || EvalError::Overflow(term.to_string());
    Ok(match term.kind() {
        TermKind::IntLit(i) => Value::Int(*i),
        TermKind::BoolLit(b) => Value::Bool(*b),
        TermKind::Const(name, _) => return Err(EvalError::UnknownConstant(name.to_string())),
        TermKind::Var(name, _) => env
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| EvalError::FreeVariable(name.to_string()))?,
        TermKind::Apply(f, args) => {
            let vals = args
                .iter()
                .map(|a| eval_env(a, lookup, apply, env))
                .collect::<Result<Vec<_>, _>>()?;
            apply(f.name(), &vals)?
        }
        TermKind::Add(a, b) => {
            let (x, y) = (
                int(eval_env(a, lookup, apply, env)?, a)?,
                int(eval_env(b, lookup, apply, env)?, b)?,
            );
            Value::Int(x.checked_add(y).ok_or_else(overflow)?)
        }
        TermKind::Sub(a, b) => {
            let (x, y) = (
                int(eval_env(a, lookup, apply, env)?, a)?,
                int(eval_env(b, lookup, apply, env)?, b)?,
            );
            Value::Int(x.checked_sub(y).ok_or_else(overflow)?)
        }
        TermKind::Neg(a) => Value::Int(
            int(eval_env(a, lookup, apply, env)?, a)?
                .checked_neg()
                .ok_or_else(overflow)?,
        ),
        TermKind::Cmp(op, a, b) => {
            let x = eval_env(a, lookup, apply, env)?;
            let y = eval_env(b, lookup, apply, env)?;
            Value::Bool(op.holds(&x, &y))
        }
        TermKind::Not(a) => Value::Bool(!boolean(eval_env(a, lookup, apply, env)?, a)?),
        TermKind::And(args) => {
            for a in args {
                if !boolean(eval_env(a, lookup, apply, env)?, a)? {
                    return Ok(Value::Bool(false));
                }
            }
            Value::Bool(true)
        }
        TermKind::Or(args) => {
            for a in args {
                if boolean(eval_env(a, lookup, apply, env)?, a)? {
                    return Ok(Value::Bool(true));
                }
            }
            Value::Bool(false)
        }
        TermKind::Implies(a, b) => {
            if boolean(eval_env(a, lookup, apply, env)?, a)? {
                Value::Bool(boolean(eval_env(b, lookup, apply, env)?, b)?)
            } else {
                Value::Bool(true)
            }
        }
        TermKind::Forall(binders, body) | TermKind::Exists(binders, body) => {
            let universal = matches!(term.kind(), TermKind::Forall(..));
            let domains = binders
                .iter()
                .map(|b| {
                    Value::domain(&b.sort)
                        .ok_or_else(|| EvalError::UnboundedQuantifier(term.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let depth = env.len();
            let mut result = universal;
            for_each_point(&domains, &mut |point| {
                env.truncate(depth);
                env.extend(
                    binders
                        .iter()
                        .map(|b| b.name.clone())
                        .zip(point.iter().copied()),
                );
                let holds = boolean(eval_env(body, lookup, apply, env)?, body)?;
                if holds != universal {
                    result = !universal;
                    return Ok(false);
                }
                Ok(true)
            })?;
            env.truncate(depth);
            Value::Bool(result)
        }
    })
}

/// Visits every point of a finite product domain in lexicographic order
/// (last coordinate fastest) until `f` returns `Ok(false)`.
pub fn for_each_point<E>(
    domains: &[Vec<Value>],
    f: &mut dyn FnMut(&[Value]) -> Result<bool, E>,
) -> Result<(), E> {
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(());
    }
    let mut idx = vec![0usize; domains.len()];
    let mut point: Vec<Value> = domains.iter().map(|d| d[0]).collect();
    loop {
        if !f(&point)? {
            return Ok(());
        }
        let mut k = domains.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                point[k] = domains[k][idx[k]];
                break;
            }
            idx[k] = 0;
            point[k] = domains[k][0];
        }
    }
}

/// Evaluates comparisons between two literals; other atoms are left alone.
pub fn fold_literal_comparison(t: &Term) -> Option<bool> {
    match t.kind() {
        TermKind::Cmp(op, a, b) if a.is_literal() && b.is_literal() => {
            let x = literal_value(a)?;
            let y = literal_value(b)?;
            Some(op.holds(&x, &y))
        }
        TermKind::Implies(a, b) if a.is_literal() && b.is_literal() => {
            let x = literal_value(a)?.as_bool()?;
            let y = literal_value(b)?.as_bool()?;
            Some(!x || y)
        }
        TermKind::BoolLit(b) => Some(*b),
        _ => None,
    }
}

fn literal_value(t: &Term) -> Option<Value> {
    match t.kind() {
        TermKind::IntLit(i) => Some(Value::Int(*i)),
        TermKind::BoolLit(b) => Some(Value::Bool(*b)),
        _ => None,
    }
}
