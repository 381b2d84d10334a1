//! The problem file format: TOML with a version tag and three arrays of
//! tables. See `docs/problem-format.md` for the grammar.
//!
//! ```toml
//! version = 1
//!
//! [[variables]]
//! name = "a"
//! domain = "0..3"
//!
//! [[regulations]]
//! source = "a"
//! target = "a"
//! sign = "monotone"
//! essential = true
//!
//! [[observations]]
//! name = "F1"
//! values = { a = 0 }
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::infer::{
    FixedPointObservation, InferError, InferenceProblem, NetworkVariable, Regulation, Sign,
};
use crate::model::Value;
use crate::term::SortKind;

pub const FORMAT_VERSION: i64 = 1;

/// A parse or validation error with a 1-based position when known.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{message}", position.map(|(l, c)| format!("line {l}, column {c}: ")).unwrap_or_default())]
pub struct ProblemFileError {
    pub position: Option<(usize, usize)>,
    pub message: String,
    /// The validation error behind the message, if any.
    pub cause: Option<InferError>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: Spanned<i64>,
    #[serde(default)]
    variables: Vec<RawVariable>,
    #[serde(default)]
    regulations: Vec<RawRegulation>,
    #[serde(default)]
    observations: Vec<RawObservation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    name: Spanned<String>,
    domain: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegulation {
    source: Spanned<String>,
    target: Spanned<String>,
    #[serde(default = "unknown_sign")]
    sign: Spanned<String>,
    #[serde(default)]
    essential: bool,
}

fn unknown_sign() -> Spanned<String> {
    Spanned::new(0..0, "unknown".to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObservation {
    name: Spanned<String>,
    values: Spanned<BTreeMap<String, RawValue>>,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(untagged)]
enum RawValue {
    Bool(bool),
    Int(i64),
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before
        .rfind('\n')
        .map_or(before.len(), |i| before.len() - i - 1)
        + 1;
    (line, col)
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn err(&self, span: Range<usize>, message: impl Into<String>) -> ProblemFileError {
        ProblemFileError {
            position: (span.end > 0).then(|| position(self.text, span.start)),
            message: message.into(),
            cause: None,
        }
    }

    fn infer_err(&self, span: Range<usize>, e: InferError) -> ProblemFileError {
        ProblemFileError {
            cause: Some(e.clone()),
            ..self.err(span, e.to_string())
        }
    }
}

fn parse_domain(name: &str, text: &str) -> Result<NetworkVariable, Result<InferError, String>> {
    match text.trim() {
        "bool" => Ok(NetworkVariable::boolean(name)),
        "int" => Ok(NetworkVariable::unbounded(name)),
        other => {
            let (lo, hi) = other.split_once("..").ok_or_else(|| {
                Err(format!(
                    "unknown domain `{other}`; expected bool, int or 0..N"
                ))
            })?;
            let lo: i64 = lo
                .trim()
                .parse()
                .map_err(|_| Err(format!("bad domain `{other}`")))?;
            let hi: i64 = hi
                .trim()
                .parse()
                .map_err(|_| Err(format!("bad domain `{other}`")))?;
            if lo != 0 {
                return Err(Err(format!("domain `{other}` must start at 0")));
            }
            NetworkVariable::leveled(name, hi).map_err(Ok)
        }
    }
}

fn parse_sign(s: &str) -> Option<Sign> {
    match s {
        "monotone" => Some(Sign::Monotone),
        "anti-monotone" => Some(Sign::AntiMonotone),
        "unknown" => Some(Sign::Unknown),
        _ => None,
    }
}

pub fn parse_problem(text: &str) -> Result<InferenceProblem, ProblemFileError> {
    let ctx = Ctx { text };
    let raw: RawFile = toml::from_str(text).map_err(|e| ProblemFileError {
        position: e.span().map(|s| position(text, s.start)),
        message: e.message().to_string(),
        cause: None,
    })?;
    if *raw.version.get_ref() != FORMAT_VERSION {
        return Err(ctx.err(
            raw.version.span(),
            format!(
                "unsupported format version {}; expected {FORMAT_VERSION}",
                raw.version.get_ref()
            ),
        ));
    }

    let mut variables = Vec::with_capacity(raw.variables.len());
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for v in &raw.variables {
        let name = v.name.get_ref();
        let var = parse_domain(name, v.domain.get_ref()).map_err(|e| match e {
            Ok(ie) => ctx.infer_err(v.domain.span(), ie),
            Err(msg) => ctx.err(v.domain.span(), msg),
        })?;
        if index.insert(name, variables.len()).is_some() {
            return Err(ctx.infer_err(v.name.span(), InferError::DuplicateVariable(name.clone())));
        }
        variables.push(var);
    }
    let lookup = |s: &Spanned<String>| {
        index.get(s.get_ref().as_str()).copied().ok_or_else(|| {
            ctx.infer_err(s.span(), InferError::UnknownVariable(s.get_ref().clone()))
        })
    };

    let mut regulations: Vec<Regulation> = Vec::with_capacity(raw.regulations.len());
    for r in &raw.regulations {
        let source = lookup(&r.source)?;
        let target = lookup(&r.target)?;
        let sign = parse_sign(r.sign.get_ref()).ok_or_else(|| {
            ctx.err(
                r.sign.span(),
                format!(
                    "unknown sign `{}`; expected monotone, anti-monotone or unknown",
                    r.sign.get_ref()
                ),
            )
        })?;
        if regulations
            .iter()
            .any(|x| x.source == source && x.target == target)
        {
            return Err(ctx.infer_err(
                r.source.span(),
                InferError::DuplicateRegulation {
                    regulator: r.source.get_ref().clone(),
                    target: r.target.get_ref().clone(),
                },
            ));
        }
        regulations.push(Regulation {
            source,
            target,
            sign,
            essential: r.essential,
        });
    }

    let mut observations = Vec::with_capacity(raw.observations.len());
    for o in &raw.observations {
        let mut assignments = BTreeMap::new();
        for (name, value) in o.values.get_ref() {
            let &i = index.get(name.as_str()).ok_or_else(|| {
                ctx.infer_err(o.values.span(), InferError::UnknownVariable(name.clone()))
            })?;
            let var = &variables[i];
            let value = match (*value, var.domain().kind()) {
                (RawValue::Bool(b), SortKind::Bool) => Value::Bool(b),
                (RawValue::Int(0), SortKind::Bool) => Value::Bool(false),
                (RawValue::Int(1), SortKind::Bool) => Value::Bool(true),
                (RawValue::Int(k), _) => Value::Int(k),
                (RawValue::Bool(b), SortKind::Int) => Value::Bool(b),
            };
            if !value.in_domain(&var.domain()) {
                return Err(ctx.infer_err(
                    o.values.span(),
                    InferError::DomainViolation {
                        variable: name.clone(),
                        value,
                    },
                ));
            }
            assignments.insert(i, value);
        }
        if assignments.is_empty() {
            return Err(ctx.infer_err(
                o.values.span(),
                InferError::EmptyObservation(o.name.get_ref().clone()),
            ));
        }
        observations.push(FixedPointObservation {
            name: o.name.get_ref().clone(),
            assignments,
        });
    }

    InferenceProblem::new(variables, regulations, observations).map_err(|e| ProblemFileError {
        position: None,
        message: e.to_string(),
        cause: Some(e),
    })
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn key(s: &str) -> String {
    if !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        s.to_string()
    } else {
        quote(s)
    }
}

/// Serializes `p` in the canonical layout; `parse_problem` inverts it.
pub fn write_problem(p: &InferenceProblem) -> String {
    let mut s = format!("version = {FORMAT_VERSION}\n");
    for v in p.variables() {
        let domain = match (v.domain().kind(), v.domain().bounds()) {
            (SortKind::Bool, _) => "bool".to_string(),
            (SortKind::Int, Some((lo, hi))) => format!("{lo}..{hi}"),
            (SortKind::Int, None) => "int".to_string(),
        };
        write!(
            s,
            "\n[[variables]]\nname = {}\ndomain = {}\n",
            quote(v.name()),
            quote(&domain)
        )
        .unwrap();
    }
    let name = |i: usize| quote(p.variables()[i].name());
    for r in p.regulations() {
        write!(
            s,
            "\n[[regulations]]\nsource = {}\ntarget = {}\nsign = {}\nessential = {}\n",
            name(r.source),
            name(r.target),
            quote(r.sign.name()),
            r.essential
        )
        .unwrap();
    }
    for o in p.observations() {
        let values: Vec<String> = o
            .assignments
            .iter()
            .map(|(&i, v)| format!("{} = {v}", key(p.variables()[i].name())))
            .collect();
        write!(
            s,
            "\n[[observations]]\nname = {}\nvalues = {{ {} }}\n",
            quote(&o.name),
            values.join(", ")
        )
        .unwrap();
    }
    s
}
