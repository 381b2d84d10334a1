//! SMT-LIB2 serialization of terms and whole scripts.
//!
//! Output is a pure function of the input: declarations appear in order of
//! first occurrence in the assertions.

use std::collections::BTreeSet;
use std::fmt::{self, Write};
use std::sync::Arc;

use crate::term::{CmpOp, FunctionSymbol, Name, Sort, Term, TermKind};

const RESERVED: &[&str] = &[
    "true",
    "false",
    "and",
    "or",
    "not",
    "xor",
    "distinct",
    "ite",
    "let",
    "forall",
    "exists",
    "match",
    "par",
    "as",
    "assert",
    "_",
    "!",
    "NUMERAL",
    "DECIMAL",
    "STRING",
    "BINARY",
    "HEXADECIMAL",
];

/// Writes `name` as an SMT-LIB symbol, quoting it with `|…|` unless it is a
/// plain identifier.
pub fn write_symbol(out: &mut impl Write, name: &str) -> fmt::Result {
    let plain = name
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
        && !RESERVED.contains(&name);
    if plain {
        out.write_str(name)
    } else {
        write!(out, "|{name}|")
    }
}

pub fn symbol(name: &str) -> String {
    let mut s = String::new();
    write_symbol(&mut s, name).unwrap();
    s
}

fn write_int(out: &mut impl Write, i: i64) -> fmt::Result {
    if i < 0 {
        write!(out, "(- {})", i.unsigned_abs())
    } else {
        write!(out, "{i}")
    }
}

fn write_app(out: &mut impl Write, head: &str, args: &[&Term]) -> fmt::Result {
    write!(out, "({head}")?;
    for a in args {
        out.write_char(' ')?;
        write_term(out, a)?;
    }
    out.write_char(')')
}

pub fn write_term(out: &mut impl Write, t: &Term) -> fmt::Result {
    match t.kind() {
        TermKind::IntLit(i) => write_int(out, *i),
        TermKind::BoolLit(b) => write!(out, "{b}"),
        TermKind::Const(name, _) | TermKind::Var(name, _) => write_symbol(out, name),
        TermKind::Apply(f, args) => {
            if args.is_empty() {
                write_symbol(out, f.name())
            } else {
                out.write_char('(')?;
                write_symbol(out, f.name())?;
                for a in args {
                    out.write_char(' ')?;
                    write_term(out, a)?;
                }
                out.write_char(')')
            }
        }
        TermKind::Add(a, b) => write_app(out, "+", &[a, b]),
        TermKind::Sub(a, b) => write_app(out, "-", &[a, b]),
        TermKind::Neg(a) => write_app(out, "-", &[a]),
        TermKind::Cmp(op, a, b) => {
            let head = match op {
                CmpOp::Le => "<=",
                CmpOp::Lt => "<",
                CmpOp::Ge => ">=",
                CmpOp::Gt => ">",
                CmpOp::Eq => "=",
                CmpOp::Ne => "distinct",
            };
            write_app(out, head, &[a, b])
        }
        TermKind::Not(a) => write_app(out, "not", &[a]),
        TermKind::And(args) => write_app(out, "and", &args.iter().collect::<Vec<_>>()),
        TermKind::Or(args) => write_app(out, "or", &args.iter().collect::<Vec<_>>()),
        TermKind::Implies(a, b) => write_app(out, "=>", &[a, b]),
        TermKind::Forall(bs, body) | TermKind::Exists(bs, body) => {
            let q = if matches!(t.kind(), TermKind::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            write!(out, "({q} (")?;
            for (i, b) in bs.iter().enumerate() {
                if i > 0 {
                    out.write_char(' ')?;
                }
                out.write_char('(')?;
                write_symbol(out, &b.name)?;
                write!(out, " {})", b.sort)?;
            }
            out.write_str(") ")?;
            write_term(out, body)?;
            out.write_char(')')
        }
    }
}

/// A declaration needed by a script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Declaration {
    Const(Name, Sort),
    Fun(Arc<FunctionSymbol>),
}

impl Declaration {
    pub fn name(&self) -> &str {
        match self {
            Declaration::Const(n, _) => n,
            Declaration::Fun(f) => f.name(),
        }
    }

    pub fn to_smtlib(&self) -> String {
        let mut s = String::from("(declare-fun ");
        write_symbol(&mut s, self.name()).unwrap();
        match self {
            Declaration::Const(_, sort) => write!(s, " () {sort})").unwrap(),
            Declaration::Fun(f) => {
                s.push_str(" (");
                for (i, a) in f.arg_sorts().iter().enumerate() {
                    if i > 0 {
                        s.push(' ');
                    }
                    write!(s, "{a}").unwrap();
                }
                write!(s, ") {})", f.result_sort()).unwrap();
            }
        }
        s
    }
}

/// Declarations for every constant and function symbol in `terms`, in order
/// of first occurrence.
pub fn collect_declarations<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Vec<Declaration> {
    let mut seen: BTreeSet<Name> = BTreeSet::new();
    let mut out = Vec::new();
    for t in terms {
        t.visit(&mut |n| match n.kind() {
            TermKind::Const(name, sort) => {
                if seen.insert(name.clone()) {
                    out.push(Declaration::Const(name.clone(), *sort));
                }
            }
            TermKind::Apply(f, _) => {
                if seen.insert(f.name_rc().clone()) {
                    out.push(Declaration::Fun(f.clone()));
                }
            }
            _ => {}
        });
    }
    out
}

/// `QF_UF` for purely Boolean content, `QF_UFLIA` once integers appear; the
/// `QF_` prefix is dropped when any quantifier is present.
pub fn logic_for<'a>(terms: impl IntoIterator<Item = &'a Term>) -> &'static str {
    let mut ints = false;
    let mut quantified = false;
    for t in terms {
        t.visit(&mut |n| {
            match n.kind() {
                TermKind::Forall(bs, _) | TermKind::Exists(bs, _) => {
                    quantified = true;
                    if bs.iter().any(|b| b.sort.is_int()) {
                        ints = true;
                    }
                }
                TermKind::Apply(f, _) => {
                    if f.arg_sorts().iter().any(|s| s.is_int()) {
                        ints = true;
                    }
                }
                _ => {}
            }
            if n.sort().is_int() {
                ints = true;
            }
        });
    }
    match (quantified, ints) {
        (false, false) => "QF_UF",
        (false, true) => "QF_UFLIA",
        (true, false) => "UF",
        (true, true) => "UFLIA",
    }
}

#[derive(Debug, Clone)]
pub struct ScriptOptions {
    pub produce_models: bool,
    pub check_sat: bool,
    /// Overrides the logic derived from the content.
    pub logic: Option<String>,
}

impl Default for ScriptOptions {
    fn default() -> Self {
        ScriptOptions {
            produce_models: true,
            check_sat: true,
            logic: None,
        }
    }
}

pub fn script_header(logic: &str, produce_models: bool) -> String {
    let mut s = String::from("(set-option :print-success false)\n");
    if produce_models {
        s.push_str("(set-option :produce-models true)\n");
    }
    writeln!(s, "(set-logic {logic})").unwrap();
    s
}

/// A complete script: header, declarations, one `assert` per assertion, and
/// `(check-sat)`.
pub fn emit_smtlib(
    declarations: &[Declaration],
    assertions: &[Term],
    options: &ScriptOptions,
) -> String {
    let logic = options
        .logic
        .clone()
        .unwrap_or_else(|| logic_for(assertions).to_string());
    let mut s = script_header(&logic, options.produce_models);
    for d in declarations {
        s.push_str(&d.to_smtlib());
        s.push('\n');
    }
    for a in assertions {
        s.push_str("(assert ");
        write_term(&mut s, a).unwrap();
        s.push_str(")\n");
    }
    if options.check_sat {
        s.push_str("(check-sat)\n");
    }
    s
}

/// Script for `assertions` with declarations collected from them.
pub fn emit_script(assertions: &[Term]) -> String {
    let decls = collect_declarations(assertions);
    emit_smtlib(&decls, assertions, &ScriptOptions::default())
}
