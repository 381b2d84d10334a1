//! Reconstruction of finite models from `(get-model)` and `(get-value …)`
//! responses.
//!
//! Function bodies are accepted when they are `ite` chains whose conditions
//! pin every parameter to a value, ending in a value:
//!
//! ```text
//! (define-fun g ((x!0 Int)) Int (ite (= x!0 4) 2 1))
//! ```
//!
//! Anything else is reported as unsupported with the raw text preserved.

use std::collections::BTreeMap;

use crate::model::{FunctionTable, Model, Value};
use crate::smt::session::SolverError;
use crate::smt::sexp::{self, Sexp};

fn unsupported(reason: impl Into<String>, raw: &str) -> SolverError {
    SolverError::UnsupportedModel {
        reason: reason.into(),
        raw: raw.to_string(),
    }
}

/// Parses a ground value: numeral, `(- numeral)`, `true` or `false`.
pub fn parse_value(e: &Sexp) -> Option<Value> {
    match e {
        Sexp::Atom(a) if a == "true" => Some(Value::Bool(true)),
        Sexp::Atom(a) if a == "false" => Some(Value::Bool(false)),
        Sexp::Atom(a) => a.parse::<i64>().ok().map(Value::Int),
        Sexp::List(items) if items.len() == 2 && items[0].is_atom("-") => {
            match parse_value(&items[1])? {
                Value::Int(i) => Some(Value::Int(-i)),
                Value::Bool(_) => None,
            }
        }
        _ => None,
    }
}

/// Values from a `(get-value (t1 … tn))` response, in query order.
pub fn parse_value_response(text: &str, expected: usize) -> Result<Vec<Value>, SolverError> {
    let e =
        sexp::parse_one(text).map_err(|err| SolverError::Malformed(format!("{err}: {text}")))?;
    let pairs = e
        .list()
        .ok_or_else(|| SolverError::Malformed(text.to_string()))?;
    if pairs.len() != expected {
        return Err(SolverError::Malformed(format!(
            "expected {expected} values, got {}: {text}",
            pairs.len()
        )));
    }
    pairs
        .iter()
        .map(|p| {
            p.list()
                .filter(|l| l.len() == 2)
                .and_then(|l| parse_value(&l[1]))
                .ok_or_else(|| SolverError::Malformed(format!("bad value pair {p}")))
        })
        .collect()
}

/// Parses a model given as a list of `define-fun` entries, optionally
/// wrapped as `(model …)`.
pub fn parse_model_response(text: &str) -> Result<Model, SolverError> {
    let e =
        sexp::parse_one(text).map_err(|err| SolverError::Malformed(format!("{err}: {text}")))?;
    let mut entries = e
        .list()
        .ok_or_else(|| SolverError::Malformed(text.to_string()))?;
    if entries.first().is_some_and(|h| h.is_atom("model")) {
        entries = &entries[1..];
    }
    let mut model = Model::new();
    for entry in entries {
        let items = entry
            .list()
            .ok_or_else(|| unsupported("expected define-fun", text))?;
        match items.first().and_then(Sexp::atom) {
            Some("define-fun") if items.len() == 5 => {}
            // Uninterpreted sort universes and similar auxiliary output.
            Some("declare-fun") | Some("declare-sort") | Some("forall") => continue,
            _ => return Err(unsupported("expected define-fun", text)),
        }
        let name = items[1]
            .atom()
            .ok_or_else(|| unsupported("bad function name", text))?;
        let params: Vec<&str> = items[2]
            .list()
            .ok_or_else(|| unsupported("bad parameter list", text))?
            .iter()
            .map(|p| p.list().and_then(|l| l.first()).and_then(Sexp::atom))
            .collect::<Option<_>>()
            .ok_or_else(|| unsupported("bad parameter", text))?;
        if params.is_empty() {
            let v = parse_value(&items[4])
                .ok_or_else(|| unsupported(format!("constant `{name}` is not a value"), text))?;
            model.constants.insert(name.into(), v);
        } else {
            let table = flatten_ite(&params, &items[4])
                .map_err(|reason| unsupported(format!("function `{name}`: {reason}"), text))?;
            model.functions.insert(name.into(), table);
        }
    }
    Ok(model)
}

fn flatten_ite(params: &[&str], body: &Sexp) -> Result<FunctionTable, String> {
    let mut points = BTreeMap::new();
    let mut cur = body;
    loop {
        if let Some(v) = parse_value(cur) {
            return Ok(FunctionTable { points, default: v });
        }
        let items = cur
            .list()
            .filter(|l| l.len() == 4 && l[0].is_atom("ite"))
            .ok_or_else(|| format!("body outside ite-chain fragment: {cur}"))?;
        let key = condition_point(params, &items[1])?;
        let out =
            parse_value(&items[2]).ok_or_else(|| format!("branch is not a value: {}", items[2]))?;
        // Earlier branches shadow later ones.
        points.entry(key).or_insert(out);
        cur = &items[3];
    }
}

/// Reads a conjunction of parameter/value equalities into a point.
fn condition_point(params: &[&str], cond: &Sexp) -> Result<Vec<Value>, String> {
    let atoms: Vec<&Sexp> = match cond.list() {
        Some(l) if l.first().is_some_and(|h| h.is_atom("and")) => l[1..].iter().collect(),
        _ => vec![cond],
    };
    let mut point: Vec<Option<Value>> = vec![None; params.len()];
    let param_index = |e: &Sexp| e.atom().and_then(|a| params.iter().position(|p| *p == a));
    for atom in atoms {
        let (idx, value) = if let Some(i) = param_index(atom) {
            (i, Value::Bool(true))
        } else {
            match atom.list() {
                Some([n, x]) if n.is_atom("not") && param_index(x).is_some() => {
                    (param_index(x).unwrap(), Value::Bool(false))
                }
                Some([eq, a, b]) if eq.is_atom("=") => match (param_index(a), param_index(b)) {
                    (Some(i), None) => (i, parse_value(b).ok_or("non-value in condition")?),
                    (None, Some(i)) => (i, parse_value(a).ok_or("non-value in condition")?),
                    _ => return Err(format!("unsupported condition {atom}")),
                },
                _ => return Err(format!("unsupported condition {atom}")),
            }
        };
        if point[idx].replace(value).is_some_and(|old| old != value) {
            return Err(format!("contradictory condition {cond}"));
        }
    }
    point
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| format!("condition does not fix every parameter: {cond}"))
}
