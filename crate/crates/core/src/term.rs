//! Sorted first-order terms over Booleans and integers with uninterpreted
//! function applications.
//!
//! Terms are immutable and reference counted; equality, ordering and hashing
//! are structural. Every constructor checks sorts, so a [`Term`] that exists
//! is sort-correct. Scoping of bound variables is checked by
//! [`Term::check_closed`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub type Name = Arc<str>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SortKind {
    Bool,
    Int,
}

/// A sort, optionally carrying inclusive integer bounds.
///
/// Bounds describe the intended domain of a symbol or constant. They do not
/// change the underlying SMT sort, so two integer sorts with different bounds
/// are compatible for sort checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort {
    kind: SortKind,
    bounds: Option<(i64, i64)>,
}

impl Sort {
    pub const BOOL: Sort = Sort {
        kind: SortKind::Bool,
        bounds: None,
    };
    pub const INT: Sort = Sort {
        kind: SortKind::Int,
        bounds: None,
    };

    pub fn bounded_int(lo: i64, hi: i64) -> Result<Sort, TermError> {
        if lo > hi {
            return Err(TermError::EmptyBounds { lo, hi });
        }
        Ok(Sort {
            kind: SortKind::Int,
            bounds: Some((lo, hi)),
        })
    }

    pub fn kind(&self) -> SortKind {
        self.kind
    }

    pub fn bounds(&self) -> Option<(i64, i64)> {
        self.bounds
    }

    pub fn is_bool(&self) -> bool {
        self.kind == SortKind::Bool
    }

    pub fn is_int(&self) -> bool {
        self.kind == SortKind::Int
    }

    /// Same underlying sort, ignoring bounds.
    pub fn compatible(&self, other: &Sort) -> bool {
        self.kind == other.kind
    }

    /// Number of values in the domain, when finite.
    pub fn domain_size(&self) -> Option<u64> {
        match (self.kind, self.bounds) {
            (SortKind::Bool, _) => Some(2),
            (SortKind::Int, Some((lo, hi))) => Some((hi - lo) as u64 + 1),
            (SortKind::Int, None) => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SortKind::Bool => f.write_str("Bool"),
            SortKind::Int => f.write_str("Int"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionSymbol {
    name: Name,
    arg_sorts: Vec<Sort>,
    result_sort: Sort,
    uninterpreted: bool,
}

impl FunctionSymbol {
    /// An uninterpreted symbol.
    pub fn new(name: impl Into<Name>, arg_sorts: Vec<Sort>, result_sort: Sort) -> Arc<Self> {
        Arc::new(FunctionSymbol {
            name: name.into(),
            arg_sorts,
            result_sort,
            uninterpreted: true,
        })
    }

    pub fn interpreted(
        name: impl Into<Name>,
        arg_sorts: Vec<Sort>,
        result_sort: Sort,
    ) -> Arc<Self> {
        Arc::new(FunctionSymbol {
            name: name.into(),
            arg_sorts,
            result_sort,
            uninterpreted: false,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn name_rc(&self) -> &Name {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }

    pub fn arg_sorts(&self) -> &[Sort] {
        &self.arg_sorts
    }

    pub fn result_sort(&self) -> Sort {
        self.result_sort
    }

    pub fn is_uninterpreted(&self) -> bool {
        self.uninterpreted
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl CmpOp {
    /// Only equality and disequality are defined on Booleans.
    pub fn is_ordering(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }

    pub fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            CmpOp::Le => lhs <= rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binder {
    pub name: Name,
    pub sort: Sort,
}

impl Binder {
    pub fn new(name: impl Into<Name>, sort: Sort) -> Self {
        Binder {
            name: name.into(),
            sort,
        }
    }

    pub fn var(&self) -> Term {
        Term::var(self.name.clone(), self.sort)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    IntLit(i64),
    BoolLit(bool),
    Const(Name, Sort),
    Var(Name, Sort),
    Apply(Arc<FunctionSymbol>, Vec<Term>),
    Add(Term, Term),
    Sub(Term, Term),
    Neg(Term),
    Cmp(CmpOp, Term, Term),
    Not(Term),
    And(Vec<Term>),
    Or(Vec<Term>),
    Implies(Term, Term),
    Forall(Vec<Binder>, Term),
    Exists(Vec<Binder>, Term),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(Arc<TermKind>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("sort mismatch in {context}: expected {expected}, found {found}")]
    SortMismatch {
        context: String,
        expected: Sort,
        found: Sort,
    },
    #[error("{symbol} expects {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("ordering comparison on Booleans; use an ordering atom instead")]
    BoolOrdering,
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("empty bounds {lo} > {hi}")]
    EmptyBounds { lo: i64, hi: i64 },
    #[error("bound variable `{0}` shadows an enclosing binder")]
    Shadowing(String),
    #[error("variable `{0}` occurs free")]
    FreeVariable(String),
    #[error("variable `{0}` used with a sort different from its binder")]
    VariableSort(String),
    #[error("reserved name `{0}`")]
    ReservedName(String),
}

fn expect_sort(context: &str, expected: Sort, term: &Term) -> Result<(), TermError> {
    let found = term.sort();
    if expected.compatible(&found) {
        Ok(())
    } else {
        Err(TermError::SortMismatch {
            context: context.to_string(),
            expected,
            found,
        })
    }
}

impl Term {
    fn mk(kind: TermKind) -> Term {
        Term(Arc::new(kind))
    }

    /// Wraps a node without re-checking sorts; callers rebuild nodes whose
    /// children keep their sorts.
    pub(crate) fn from_kind(kind: TermKind) -> Term {
        Term::mk(kind)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0
    }

    pub fn int(value: i64) -> Term {
        Term::mk(TermKind::IntLit(value))
    }

    pub fn bool(value: bool) -> Term {
        Term::mk(TermKind::BoolLit(value))
    }

    pub fn tt() -> Term {
        Term::bool(true)
    }

    pub fn ff() -> Term {
        Term::bool(false)
    }

    pub fn constant(name: impl Into<Name>, sort: Sort) -> Term {
        Term::mk(TermKind::Const(name.into(), sort))
    }

    pub fn var(name: impl Into<Name>, sort: Sort) -> Term {
        Term::mk(TermKind::Var(name.into(), sort))
    }

    pub fn apply(symbol: &Arc<FunctionSymbol>, args: Vec<Term>) -> Result<Term, TermError> {
        if args.len() != symbol.arity() {
            return Err(TermError::ArityMismatch {
                symbol: symbol.name().to_string(),
                expected: symbol.arity(),
                found: args.len(),
            });
        }
        for (sort, arg) in symbol.arg_sorts().iter().zip(&args) {
            expect_sort(symbol.name(), *sort, arg)?;
        }
        Ok(Term::mk(TermKind::Apply(symbol.clone(), args)))
    }

    pub fn add(lhs: Term, rhs: Term) -> Result<Term, TermError> {
        expect_sort("+", Sort::INT, &lhs)?;
        expect_sort("+", Sort::INT, &rhs)?;
        Ok(Term::mk(TermKind::Add(lhs, rhs)))
    }

    pub fn sub(lhs: Term, rhs: Term) -> Result<Term, TermError> {
        expect_sort("-", Sort::INT, &lhs)?;
        expect_sort("-", Sort::INT, &rhs)?;
        Ok(Term::mk(TermKind::Sub(lhs, rhs)))
    }

    pub fn neg(arg: Term) -> Result<Term, TermError> {
        expect_sort("-", Sort::INT, &arg)?;
        Ok(Term::mk(TermKind::Neg(arg)))
    }

    pub fn cmp(op: CmpOp, lhs: Term, rhs: Term) -> Result<Term, TermError> {
        let sort = lhs.sort();
        expect_sort("comparison", sort, &rhs)?;
        if sort.is_bool() && op.is_ordering() {
            return Err(TermError::BoolOrdering);
        }
        Ok(Term::mk(TermKind::Cmp(op, lhs, rhs)))
    }

    pub fn eq(lhs: Term, rhs: Term) -> Result<Term, TermError> {
        Term::cmp(CmpOp::Eq, lhs, rhs)
    }

    pub fn ne(lhs: Term, rhs: Term) -> Result<Term, TermError> {
        Term::cmp(CmpOp::Ne, lhs, rhs)
    }

    pub fn le(lhs: Term, rhs: Term) -> Result<Term, TermError> {
        Term::cmp(CmpOp::Le, lhs, rhs)
    }

    pub fn not(arg: Term) -> Result<Term, TermError> {
        expect_sort("not", Sort::BOOL, &arg)?;
        Ok(Term::mk(TermKind::Not(arg)))
    }

    /// Conjunction; a single conjunct is returned as is and the empty
    /// conjunction is `true`.
    pub fn and(mut args: Vec<Term>) -> Result<Term, TermError> {
        for arg in &args {
            expect_sort("and", Sort::BOOL, arg)?;
        }
        Ok(match args.len() {
            0 => Term::tt(),
            1 => args.pop().unwrap(),
            _ => Term::mk(TermKind::And(args)),
        })
    }

    pub fn or(mut args: Vec<Term>) -> Result<Term, TermError> {
        for arg in &args {
            expect_sort("or", Sort::BOOL, arg)?;
        }
        Ok(match args.len() {
            0 => Term::ff(),
            1 => args.pop().unwrap(),
            _ => Term::mk(TermKind::Or(args)),
        })
    }

    pub fn implies(lhs: Term, rhs: Term) -> Result<Term, TermError> {
        expect_sort("=>", Sort::BOOL, &lhs)?;
        expect_sort("=>", Sort::BOOL, &rhs)?;
        Ok(Term::mk(TermKind::Implies(lhs, rhs)))
    }

    pub fn forall(binders: Vec<Binder>, body: Term) -> Result<Term, TermError> {
        Term::binder(binders, body, true)
    }

    pub fn exists(binders: Vec<Binder>, body: Term) -> Result<Term, TermError> {
        Term::binder(binders, body, false)
    }

    fn binder(binders: Vec<Binder>, body: Term, universal: bool) -> Result<Term, TermError> {
        expect_sort(
            if universal { "forall" } else { "exists" },
            Sort::BOOL,
            &body,
        )?;
        if binders.is_empty() {
            return Ok(body);
        }
        let mut names = BTreeSet::new();
        for b in &binders {
            if !names.insert(b.name.clone()) {
                return Err(TermError::Shadowing(b.name.to_string()));
            }
        }
        let mut inner = Vec::new();
        body.visit(&mut |t| {
            if let TermKind::Forall(bs, _) | TermKind::Exists(bs, _) = t.kind() {
                inner.extend(bs.iter().map(|b| b.name.clone()));
            }
        });
        if let Some(name) = inner.iter().find(|n| names.contains(*n)) {
            return Err(TermError::Shadowing(name.to_string()));
        }
        Ok(Term::mk(if universal {
            TermKind::Forall(binders, body)
        } else {
            TermKind::Exists(binders, body)
        }))
    }

    pub fn sort(&self) -> Sort {
        match self.kind() {
            TermKind::IntLit(_) | TermKind::Add(..) | TermKind::Sub(..) | TermKind::Neg(_) => {
                Sort::INT
            }
            TermKind::BoolLit(_)
            | TermKind::Cmp(..)
            | TermKind::Not(_)
            | TermKind::And(_)
            | TermKind::Or(_)
            | TermKind::Implies(..)
            | TermKind::Forall(..)
            | TermKind::Exists(..) => Sort::BOOL,
            TermKind::Const(_, s) | TermKind::Var(_, s) => *s,
            TermKind::Apply(f, _) => f.result_sort(),
        }
    }

    /// Immediate subterms, in argument order.
    pub fn children(&self) -> Vec<&Term> {
        match self.kind() {
            TermKind::IntLit(_)
            | TermKind::BoolLit(_)
            | TermKind::Const(..)
            | TermKind::Var(..) => {
                vec![]
            }
            TermKind::Apply(_, args) | TermKind::And(args) | TermKind::Or(args) => {
                args.iter().collect()
            }
            TermKind::Add(a, b)
            | TermKind::Sub(a, b)
            | TermKind::Cmp(_, a, b)
            | TermKind::Implies(a, b) => vec![a, b],
            TermKind::Neg(a) | TermKind::Not(a) => vec![a],
            TermKind::Forall(_, body) | TermKind::Exists(_, body) => vec![body],
        }
    }

    /// Pre-order traversal over every node, quantifier bodies included.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            f(t);
            let children = t.children();
            stack.extend(children.into_iter().rev());
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self.kind(), TermKind::IntLit(_) | TermKind::BoolLit(_))
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |t| {
            if matches!(t.kind(), TermKind::Forall(..) | TermKind::Exists(..)) {
                qf = false;
            }
        });
        qf
    }

    /// No free or bound variables occur.
    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.visit(&mut |t| {
            if matches!(
                t.kind(),
                TermKind::Var(..) | TermKind::Forall(..) | TermKind::Exists(..)
            ) {
                ground = false;
            }
        });
        ground
    }

    /// Checks that every variable occurs under a binder declaring it with the
    /// same sort.
    pub fn check_closed(&self) -> Result<(), TermError> {
        fn go(t: &Term, env: &mut Vec<Binder>) -> Result<(), TermError> {
            match t.kind() {
                TermKind::Var(name, sort) => match env.iter().rev().find(|b| &b.name == name) {
                    None => Err(TermError::FreeVariable(name.to_string())),
                    Some(b) if b.sort.compatible(sort) => Ok(()),
                    Some(_) => Err(TermError::VariableSort(name.to_string())),
                },
                TermKind::Forall(bs, body) | TermKind::Exists(bs, body) => {
                    let depth = env.len();
                    env.extend(bs.iter().cloned());
                    let r = go(body, env);
                    env.truncate(depth);
                    r
                }
                _ => t.children().into_iter().try_for_each(|c| go(c, env)),
            }
        }
        go(self, &mut Vec::new())
    }

    /// Replaces variables by terms. Binders in `self` must not rebind any of
    /// the substituted names (guaranteed by the no-shadowing rule when the
    /// map comes from an enclosing binder).
    pub fn substitute_vars(&self, map: &dyn Fn(&Name) -> Option<Term>) -> Term {
        self.rebuild(&mut |t| match t.kind() {
            TermKind::Var(name, _) => map(name),
            _ => None,
        })
    }

    /// Bottom-up rebuild; `f` may replace a node before its children are
    /// visited by returning `Some`.
    pub(crate) fn rebuild(&self, f: &mut dyn FnMut(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        let kind = match self.kind() {
            TermKind::IntLit(_)
            | TermKind::BoolLit(_)
            | TermKind::Const(..)
            | TermKind::Var(..) => return self.clone(),
            TermKind::Apply(s, args) => {
                TermKind::Apply(s.clone(), args.iter().map(|a| a.rebuild(f)).collect())
            }
            TermKind::Add(a, b) => TermKind::Add(a.rebuild(f), b.rebuild(f)),
            TermKind::Sub(a, b) => TermKind::Sub(a.rebuild(f), b.rebuild(f)),
            TermKind::Neg(a) => TermKind::Neg(a.rebuild(f)),
            TermKind::Cmp(op, a, b) => TermKind::Cmp(*op, a.rebuild(f), b.rebuild(f)),
            TermKind::Not(a) => TermKind::Not(a.rebuild(f)),
            TermKind::And(args) => TermKind::And(args.iter().map(|a| a.rebuild(f)).collect()),
            TermKind::Or(args) => TermKind::Or(args.iter().map(|a| a.rebuild(f)).collect()),
            TermKind::Implies(a, b) => TermKind::Implies(a.rebuild(f), b.rebuild(f)),
            TermKind::Forall(bs, body) => TermKind::Forall(bs.clone(), body.rebuild(f)),
            TermKind::Exists(bs, body) => TermKind::Exists(bs.clone(), body.rebuild(f)),
        };
        Term::mk(kind)
    }

    /// Flattens nested conjunctions into a list of conjuncts.
    pub fn conjuncts(&self) -> Vec<Term> {
        match self.kind() {
            TermKind::And(args) => args.iter().flat_map(|a| a.conjuncts()).collect(),
            TermKind::BoolLit(true) => vec![],
            _ => vec![self.clone()],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::smt::emit::write_term(f, self)
    }
}

/// Ordered argument vector of an application.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArgVector(pub Vec<Term>);

impl ArgVector {
    pub fn new(components: Vec<Term>) -> Self {
        ArgVector(components)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Component at 1-based position `i`.
    pub fn get(&self, i: usize) -> Option<&Term> {
        i.checked_sub(1).and_then(|k| self.0.get(k))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Term> {
        self.0.iter()
    }

    /// The vector agreeing with `self` everywhere except at 1-based position
    /// `i`, which holds `b`.
    pub fn subst_at(&self, i: usize, b: Term) -> Result<ArgVector, TermError> {
        let current = self.get(i).ok_or(TermError::IndexOutOfRange {
            index: i,
            len: self.len(),
        })?;
        expect_sort("substitution", current.sort(), &b)?;
        let mut out = self.0.clone();
        out[i - 1] = b;
        Ok(ArgVector(out))
    }
}

impl From<Vec<Term>> for ArgVector {
    fn from(v: Vec<Term>) -> Self {
        ArgVector(v)
    }
}

/// Every syntactic subterm of `phi`, `phi` included.
pub fn subterms(phi: &Term) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    phi.visit(&mut |t| {
        out.insert(t.clone());
    });
    out
}

/// Argument vectors of all applications of `symbol` in `phi`, deduplicated
/// syntactically, in first-occurrence (pre-order) order.
pub fn applications_of(phi: &Term, symbol: &FunctionSymbol) -> Vec<ArgVector> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    phi.visit(&mut |t| {
        if let TermKind::Apply(f, args) = t.kind() {
            if **f == *symbol && seen.insert(args.clone()) {
                out.push(ArgVector(args.clone()));
            }
        }
    });
    out
}

/// All application nodes of `phi`, deduplicated, in first-occurrence order.
pub fn application_terms(phi: &Term) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    phi.visit(&mut |t| {
        if matches!(t.kind(), TermKind::Apply(..)) && seen.insert(t.clone()) {
            out.push(t.clone());
        }
    });
    out
}

/// Function symbols occurring in `phi`, by first occurrence.
pub fn symbols_of(phi: &Term) -> Vec<Arc<FunctionSymbol>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    phi.visit(&mut |t| {
        if let TermKind::Apply(f, _) = t.kind() {
            if seen.insert(f.name_rc().clone()) {
                out.push(f.clone());
            }
        }
    });
    out
}

/// Free constants of `phi` with their sorts, by first occurrence.
pub fn constants_of(phi: &Term) -> Vec<(Name, Sort)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    phi.visit(&mut |t| {
        if let TermKind::Const(name, sort) = t.kind() {
            if seen.insert(name.clone()) {
                out.push((name.clone(), *sort));
            }
        }
    });
    out
}

/// The ordering `lhs ≤ rhs` on the common sort of both sides. Booleans are
/// ordered `false < true`, expressed propositionally as `lhs → rhs`.
pub fn ordering_atom(lhs: Term, rhs: Term) -> Result<Term, TermError> {
    expect_sort("ordering", lhs.sort(), &rhs)?;
    if lhs.sort().is_bool() {
        Term::implies(lhs, rhs)
    } else {
        Term::le(lhs, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_c(name: &str) -> Term {
        Term::constant(name, Sort::INT)
    }

    #[test]
    fn subst_at_replaces_one_position() {
        let v = ArgVector::new(vec![int_c("a"), int_c("b"), int_c("c")]);
        let w = v.subst_at(2, int_c("y")).unwrap();
        assert_eq!(w, ArgVector::new(vec![int_c("a"), int_c("y"), int_c("c")]));

        let v = ArgVector::new(vec![int_c("c1"), Term::int(2)]);
        assert_eq!(
            v.subst_at(2, Term::int(0)).unwrap(),
            ArgVector::new(vec![int_c("c1"), Term::int(0)])
        );

        let x = ArgVector::new(vec![int_c("x")]);
        assert_eq!(x.subst_at(1, int_c("x")).unwrap(), x);
    }

    #[test]
    fn subst_at_errors() {
        let v = ArgVector::new(vec![int_c("a")]);
        assert_eq!(
            v.subst_at(0, Term::int(1)),
            Err(TermError::IndexOutOfRange { index: 0, len: 1 })
        );
        assert!(v.subst_at(2, Term::int(1)).is_err());
        assert!(matches!(
            v.subst_at(1, Term::tt()),
            Err(TermError::SortMismatch { .. })
        ));
    }

    #[test]
    fn subterms_of_equation() {
        let f = FunctionSymbol::new("f", vec![Sort::INT, Sort::INT], Sort::INT);
        let app = Term::apply(&f, vec![int_c("c1"), Term::int(2)]).unwrap();
        let phi = Term::eq(app.clone(), Term::int(4)).unwrap();
        let subs = subterms(&phi);
        let expected: BTreeSet<Term> = [phi.clone(), app, int_c("c1"), Term::int(2), Term::int(4)]
            .into_iter()
            .collect();
        assert_eq!(subs, expected);
        assert_eq!(subterms(&int_c("c")).len(), 1);
    }

    #[test]
    fn applications_are_deduplicated() {
        let f = FunctionSymbol::new("f", vec![Sort::INT], Sort::BOOL);
        let g = FunctionSymbol::new("g", vec![Sort::INT], Sort::BOOL);
        let f0 = Term::apply(&f, vec![Term::int(0)]).unwrap();
        let phi = Term::and(vec![f0.clone(), f0]).unwrap();
        assert_eq!(
            applications_of(&phi, &f),
            vec![ArgVector::new(vec![Term::int(0)])]
        );
        assert!(applications_of(&phi, &g).is_empty());
    }

    #[test]
    fn constructors_check_sorts() {
        let f = FunctionSymbol::new("f", vec![Sort::INT], Sort::INT);
        assert!(matches!(
            Term::apply(&f, vec![Term::tt()]),
            Err(TermError::SortMismatch { .. })
        ));
        assert!(matches!(
            Term::apply(&f, vec![]),
            Err(TermError::ArityMismatch { .. })
        ));
        assert_eq!(
            Term::le(Term::tt(), Term::ff()),
            Err(TermError::BoolOrdering)
        );
        assert!(Term::and(vec![Term::int(1)]).is_err());
        assert!(Term::eq(Term::tt(), Term::ff()).is_ok());
        assert!(Sort::bounded_int(3, 1).is_err());
    }

    #[test]
    fn shadowing_is_rejected() {
        let x = Binder::new("x", Sort::INT);
        let inner =
            Term::exists(vec![x.clone()], Term::le(x.var(), Term::int(0)).unwrap()).unwrap();
        assert_eq!(
            Term::forall(vec![x], inner),
            Err(TermError::Shadowing("x".into()))
        );
    }

    #[test]
    fn closedness() {
        let x = Binder::new("x", Sort::INT);
        let body = Term::le(x.var(), Term::int(0)).unwrap();
        assert_eq!(
            body.check_closed(),
            Err(TermError::FreeVariable("x".into()))
        );
        assert!(Term::forall(vec![x], body).unwrap().check_closed().is_ok());
    }

    #[test]
    fn ordering_atoms() {
        let x = int_c("x");
        let y = int_c("y");
        assert_eq!(
            ordering_atom(x.clone(), y.clone()).unwrap(),
            Term::le(x, y).unwrap()
        );
        let p = Term::constant("p", Sort::BOOL);
        let q = Term::constant("q", Sort::BOOL);
        assert_eq!(
            ordering_atom(p.clone(), q.clone()).unwrap(),
            Term::implies(p, q).unwrap()
        );
        assert!(ordering_atom(Term::tt(), Term::int(0)).is_err());
    }
}
