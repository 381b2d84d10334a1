//! Fresh constant generation and elimination of positive existentials.

use thiserror::Error;

use crate::term::{Name, Sort, Term, TermError, TermKind};

/// Prefix of skolem constants.
pub const SKOLEM_PREFIX: &str = "!sk";
/// Prefix of auxiliary constants.
pub const AUX_PREFIX: &str = "!aux";

/// Names with a reserved prefix are produced only by [`FreshNames`].
pub fn is_reserved(name: &str) -> bool {
    name.starts_with(SKOLEM_PREFIX) || name.starts_with(AUX_PREFIX)
}

pub fn check_user_name(name: &str) -> Result<(), TermError> {
    if is_reserved(name) {
        Err(TermError::ReservedName(name.to_string()))
    } else {
        Ok(())
    }
}

/// Counter for fresh names, owned by a single query builder so that
/// encodings are reproducible.
#[derive(Debug, Default, Clone)]
pub struct FreshNames {
    next_skolem: usize,
    next_aux: usize,
}

impl FreshNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn skolem(&mut self) -> Name {
        let n = self.next_skolem;
        self.next_skolem += 1;
        format!("{SKOLEM_PREFIX}{n}").into()
    }

    pub fn aux(&mut self) -> Name {
        let n = self.next_aux;
        self.next_aux += 1;
        format!("{AUX_PREFIX}{n}").into()
    }

    pub fn skolems_issued(&self) -> usize {
        self.next_skolem
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkolemError {
    #[error("existential quantifier in negative position: {0}")]
    NegativeExistential(String),
    #[error("existential quantifier under a universal: {0}")]
    NestedExistential(String),
}

/// A constant introduced for an eliminated existential binder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skolem {
    pub name: Name,
    pub sort: Sort,
    pub bound_var: Name,
}

/// Replaces every positively occurring existential by fresh constants.
/// Returns the rewritten formula and the introduced constants.
pub fn skolemize(phi: &Term, fresh: &mut FreshNames) -> Result<(Term, Vec<Skolem>), SkolemError> {
    let mut introduced = Vec::new();
    let out = go(phi, true, false, fresh, &mut introduced)?;
    Ok((out, introduced))
}

fn go(
    t: &Term,
    positive: bool,
    under_forall: bool,
    fresh: &mut FreshNames,
    out: &mut Vec<Skolem>,
) -> Result<Term, SkolemError> {
    if t.is_quantifier_free() {
        return Ok(t.clone());
    }
    let rebuilt = match t.kind() {
        TermKind::Exists(binders, body) => {
            if !positive {
                return Err(SkolemError::NegativeExistential(t.to_string()));
            }
            if under_forall {
                return Err(SkolemError::NestedExistential(t.to_string()));
            }
            let mut consts = Vec::with_capacity(binders.len());
            for b in binders {
                let name = fresh.skolem();
                out.push(Skolem {
                    name: name.clone(),
                    sort: b.sort,
                    bound_var: b.name.clone(),
                });
                consts.push((b.name.clone(), Term::constant(name, b.sort)));
            }
            let body = body
                .substitute_vars(&|v| consts.iter().find(|(n, _)| n == v).map(|(_, c)| c.clone()));
            return go(&body, positive, under_forall, fresh, out);
        }
        TermKind::Forall(binders, body) => {
            // A universal in negative position is an existential; both are
            // outside what the encodings produce.
            if !positive {
                return Err(SkolemError::NegativeExistential(t.to_string()));
            }
            let body = go(body, positive, true, fresh, out)?;
            TermKind::Forall(binders.clone(), body)
        }
        TermKind::Not(a) => TermKind::Not(go(a, !positive, under_forall, fresh, out)?),
        TermKind::And(args) => TermKind::And(
            args.iter()
                .map(|a| go(a, positive, under_forall, fresh, out))
                .collect::<Result<_, _>>()?,
        ),
        TermKind::Or(args) => TermKind::Or(
            args.iter()
                .map(|a| go(a, positive, under_forall, fresh, out))
                .collect::<Result<_, _>>()?,
        ),
        TermKind::Implies(a, b) => TermKind::Implies(
            go(a, !positive, under_forall, fresh, out)?,
            go(b, positive, under_forall, fresh, out)?,
        ),
        // Quantifiers below comparisons (e.g. Boolean equality) have no
        // fixed polarity.
        _ => return Err(SkolemError::NegativeExistential(t.to_string())),
    };
    Ok(Term::from_kind(rebuilt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Binder, FunctionSymbol};

    #[test]
    fn single_binder() {
        let f = FunctionSymbol::new("f", vec![Sort::INT], Sort::INT);
        let x = Binder::new("x", Sort::INT);
        let phi = Term::exists(
            vec![x.clone()],
            Term::eq(Term::apply(&f, vec![x.var()]).unwrap(), Term::int(1)).unwrap(),
        )
        .unwrap();
        let mut fresh = FreshNames::new();
        let (out, sk) = skolemize(&phi, &mut fresh).unwrap();
        let k0 = Term::constant("!sk0", Sort::INT);
        assert_eq!(
            out,
            Term::eq(Term::apply(&f, vec![k0]).unwrap(), Term::int(1)).unwrap()
        );
        assert_eq!(sk.len(), 1);
        assert!(out.is_quantifier_free());
    }

    #[test]
    fn essentiality_shape() {
        let fc = FunctionSymbol::new("f_c", vec![Sort::INT], Sort::INT);
        let x = Binder::new("x", Sort::INT);
        let y = Binder::new("y", Sort::INT);
        let phi = Term::exists(
            vec![x.clone(), y.clone()],
            Term::ne(
                Term::apply(&fc, vec![x.var()]).unwrap(),
                Term::apply(&fc, vec![y.var()]).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        let (out, sk) = skolemize(&phi, &mut FreshNames::new()).unwrap();
        assert_eq!(out.to_string(), "(distinct (f_c |!sk0|) (f_c |!sk1|))");
        assert_eq!(sk.len(), 2);
    }

    #[test]
    fn quantifier_free_is_identity() {
        let p = Term::constant("p", Sort::BOOL);
        let (out, sk) = skolemize(&p, &mut FreshNames::new()).unwrap();
        assert_eq!(out, p);
        assert!(sk.is_empty());
    }

    #[test]
    fn negative_existential_is_rejected() {
        let x = Binder::new("x", Sort::BOOL);
        let ex = Term::exists(vec![x.clone()], x.var()).unwrap();
        let phi = Term::not(ex.clone()).unwrap();
        assert!(matches!(
            skolemize(&phi, &mut FreshNames::new()),
            Err(SkolemError::NegativeExistential(_))
        ));
        let phi = Term::implies(ex, Term::tt()).unwrap();
        assert!(skolemize(&phi, &mut FreshNames::new()).is_err());
    }

    #[test]
    fn fresh_names_are_reserved() {
        let mut fresh = FreshNames::new();
        assert!(is_reserved(&fresh.skolem()));
        assert!(is_reserved(&fresh.aux()));
        assert!(check_user_name("f_a").is_ok());
        assert!(check_user_name("!sk3").is_err());
    }
}
