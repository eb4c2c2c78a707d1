//! Translations between named and indexed terms.
//!
//! `w` maps a named term to an indexed one relative to a list of names
//! (the first list position holding a name gives its index); `u` goes the
//! other way and picks a fresh binder name for every abstraction and
//! closure. The uniform variants use a prefix of a fixed enumeration of
//! names as the list.

use thiserror::Error;

use crate::natset::NatSet;
use crate::term::{NamedTerm, Term, VarList, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("free variable {0} is not in the translation list")]
    FreeVariableNotInList(String),
    #[error("translation list repeats variable {0}")]
    DuplicateVariableList(String),
    #[error("free index {0} exceeds the translation list")]
    FreeIndexOutOfRange(u32),
}

/// Infinite injective stream of names `{prefix}1, {prefix}2, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarEnumeration {
    prefix: String,
}

impl Default for VarEnumeration {
    fn default() -> Self {
        VarEnumeration { prefix: "x".to_string() }
    }
}

impl VarEnumeration {
    /// The prefix must be a valid identifier start without trailing digits.
    pub fn with_prefix(prefix: impl Into<String>) -> Self {
        let prefix = prefix.into();
        assert!(
            !prefix.is_empty() && !prefix.ends_with(|c: char| c.is_ascii_digit()),
            "enumeration prefix must be nonempty and not end in a digit"
        );
        VarEnumeration { prefix }
    }

    /// 1-based.
    pub fn name(&self, i: u32) -> String {
        assert!(i >= 1);
        format!("{}{}", self.prefix, i)
    }

    pub fn prefix_list(&self, n: u32) -> VarList {
        (1..=n).map(|i| self.name(i)).collect()
    }

    /// Inverse of [`VarEnumeration::name`].
    pub fn index_of(&self, x: &str) -> Option<u32> {
        let digits = x.strip_prefix(self.prefix.as_str())?;
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.parse().ok()
    }

    /// First name of the enumeration not in `xs`.
    pub fn first_not_in(&self, xs: &VarList) -> String {
        (1..)
            .map(|i| self.name(i))
            .find(|x| !xs.contains(x))
            .expect("enumeration is infinite")
    }
}

/// `w_xs(t)`. Requires `FV(t) ⊆ xs`; duplicates in `xs` are allowed.
pub fn w_list(xs: &VarList, t: &NamedTerm) -> Result<Term, TranslateError> {
    let lookup = |x: &str| xs.position(x).ok_or_else(|| TranslateError::FreeVariableNotInList(x.to_string()));
    Ok(match t {
        NamedTerm::Var(x) => Term::Index(lookup(x)?),
        NamedTerm::App(a, b) => Term::app(w_list(xs, a)?, w_list(xs, b)?),
        NamedTerm::Abs(x, body) => Term::lam(w_list(&xs.cons(x), body)?),
        NamedTerm::ExSub(body, x, s) => Term::clos(w_list(&xs.cons(x), body)?, w_list(xs, s)?),
        NamedTerm::Meta(m, delta) => {
            let mut d = NatSet::new();
            for x in delta.iter() {
                d.insert(lookup(x)?);
            }
            Term::Meta(m.clone(), d)
        }
    })
}

/// `u_xs(a)` with binder names drawn from the default enumeration.
pub fn u_list(xs: &VarList, a: &Term) -> Result<NamedTerm, TranslateError> {
    u_list_with(xs, a, &VarEnumeration::default())
}

/// `u_xs(a)`, choosing each binder as the first name of `names` not
/// already in the current list. `xs` must be duplicate-free and cover
/// `FV(a)`.
pub fn u_list_with(xs: &VarList, a: &Term, names: &VarEnumeration) -> Result<NamedTerm, TranslateError> {
    xs.check_distinct().map_err(TranslateError::DuplicateVariableList)?;
    fn go(xs: &VarList, a: &Term, names: &VarEnumeration) -> Result<NamedTerm, TranslateError> {
        let lookup = |j: u32| xs.get(j).map(str::to_string).ok_or(TranslateError::FreeIndexOutOfRange(j));
        Ok(match a {
            Term::Index(j) => NamedTerm::Var(lookup(*j)?),
            Term::App(l, r) => NamedTerm::app(go(xs, l, names)?, go(xs, r, names)?),
            Term::Abs(body) => {
                let x = names.first_not_in(xs);
                let body = go(&xs.cons(&x), body, names)?;
                NamedTerm::Abs(x, Box::new(body))
            }
            Term::Clos(body, s) => {
                let x = names.first_not_in(xs);
                let body = go(&xs.cons(&x), body, names)?;
                NamedTerm::ExSub(Box::new(body), x, Box::new(go(xs, s, names)?))
            }
            Term::Meta(m, delta) => {
                let mut d = VarSet::new();
                for j in delta.iter() {
                    d.insert(lookup(j)?);
                }
                NamedTerm::Meta(m.clone(), d)
            }
        })
    }
    go(xs, a, names)
}

/// Shortest enumeration prefix covering the free names of `t`.
pub fn uniform_list_named(t: &NamedTerm, names: &VarEnumeration) -> Result<VarList, TranslateError> {
    let mut n = 0;
    for x in t.fv().iter() {
        let i = names.index_of(x).ok_or_else(|| TranslateError::FreeVariableNotInList(x.to_string()))?;
        n = n.max(i);
    }
    Ok(names.prefix_list(n))
}

/// Shortest enumeration prefix covering the free indexes of `a`.
pub fn uniform_list_indexed(a: &Term, names: &VarEnumeration) -> VarList {
    names.prefix_list(a.fv().greatest().unwrap_or(0))
}

pub fn w_uniform(t: &NamedTerm) -> Result<Term, TranslateError> {
    let xs = uniform_list_named(t, &VarEnumeration::default())?;
    w_list(&xs, t)
}

pub fn u_uniform(a: &Term) -> NamedTerm {
    let names = VarEnumeration::default();
    u_list_with(&uniform_list_indexed(a, &names), a, &names).expect("uniform list covers FV")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_eq;
    use crate::syntax::{parse_indexed, parse_named};

    fn xs(names: &[&str]) -> VarList {
        names.iter().copied().collect()
    }
    fn n(s: &str) -> NamedTerm {
        parse_named(s).unwrap()
    }
    fn i(s: &str) -> Term {
        parse_indexed(s).unwrap()
    }

    #[test]
    fn w_examples() {
        assert_eq!(w_list(&xs(&["x"]), &n("\\y. y x")).unwrap(), i("\\ 1 2"));
        assert_eq!(w_list(&xs(&["x"]), &n("x")).unwrap(), i("1"));
        assert_eq!(w_list(&xs(&["x"]), &n("y[y:=x]")).unwrap(), i("1[1]"));
        assert_eq!(
            w_list(&xs(&["x"]), &n("y")),
            Err(TranslateError::FreeVariableNotInList("y".into()))
        );
        // duplicates: the first occurrence wins
        assert_eq!(w_list(&xs(&["x", "x"]), &n("x")).unwrap(), i("1"));
    }

    #[test]
    fn u_examples() {
        let t = u_list(&xs(&["x"]), &i("\\ 1 2")).unwrap();
        assert!(alpha_eq(&t, &n("\\z. z x")));
        assert_eq!(u_list(&xs(&["x"]), &i("1")).unwrap(), n("x"));
        let t = u_list(&xs(&["x"]), &i("1[1]")).unwrap();
        assert!(alpha_eq(&t, &n("z[z:=x]")));
        assert_eq!(
            u_list(&xs(&["x", "x"]), &i("1")),
            Err(TranslateError::DuplicateVariableList("x".into()))
        );
        assert_eq!(u_list(&xs(&["x"]), &i("2")), Err(TranslateError::FreeIndexOutOfRange(2)));
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(u_uniform(&i("\\ 1 2")).to_string(), "\\x2. x2 x1");
        assert_eq!(w_uniform(&n("?X{x1}")).unwrap(), i("?X{1}"));
        let a = i("\\ 2 (1[\\ 3 1])");
        assert_eq!(w_uniform(&u_uniform(&a)).unwrap(), a);
        let t = n("\\y. (\\y. y) y");
        assert!(alpha_eq(&u_uniform(&w_uniform(&t).unwrap()), &t));
        assert!(w_uniform(&n("free")).is_err());
    }

    #[test]
    fn enumeration() {
        let e = VarEnumeration::default();
        assert_eq!(e.index_of("x12"), Some(12));
        assert_eq!(e.index_of("x"), None);
        assert_eq!(e.index_of("x01"), None);
        assert_eq!(e.index_of("y1"), None);
        assert_eq!(e.first_not_in(&xs(&["x1", "x3"])), "x2");
    }
}
