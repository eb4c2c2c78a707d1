//! Indexed and named term trees, positions inside them, and free variables.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::natset::NatSet;

/// Indexed term: de Bruijn indexes, explicit closures `a[b]` and decorated
/// metavariables `?X{Δ}`.
///
/// The derived ordering compares the constructor first and then the
/// children left to right; it is the total order used to pick canonical
/// representatives of equation classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Index(u32),
    App(Box<Term>, Box<Term>),
    Abs(Box<Term>),
    /// `body[subst]`
    Clos(Box<Term>, Box<Term>),
    Meta(String, NatSet),
}

impl Term {
    pub fn idx(n: u32) -> Term {
        assert!(n >= 1, "de Bruijn indexes start at 1");
        Term::Index(n)
    }

    pub fn app(l: Term, r: Term) -> Term {
        Term::App(Box::new(l), Box::new(r))
    }

    pub fn lam(body: Term) -> Term {
        Term::Abs(Box::new(body))
    }

    pub fn clos(body: Term, subst: Term) -> Term {
        Term::Clos(Box::new(body), Box::new(subst))
    }

    pub fn meta(name: impl Into<String>, delta: NatSet) -> Term {
        Term::Meta(name.into(), delta)
    }

    pub fn fv(&self) -> NatSet {
        match self {
            Term::Index(n) => NatSet::singleton(*n),
            Term::App(a, b) => a.fv().union(&b.fv()),
            Term::Abs(a) => a.fv().shift_down(1),
            Term::Clos(a, b) => a.fv().shift_down(1).union(&b.fv()),
            Term::Meta(_, delta) => delta.clone(),
        }
    }

    /// `i ∈ FV(self)` without materialising the whole set.
    pub fn has_free(&self, i: u32) -> bool {
        match self {
            Term::Index(n) => *n == i,
            Term::App(a, b) => a.has_free(i) || b.has_free(i),
            Term::Abs(a) => a.has_free(i + 1),
            Term::Clos(a, b) => a.has_free(i + 1) || b.has_free(i),
            Term::Meta(_, delta) => delta.contains(i),
        }
    }

    /// No closure anywhere.
    pub fn is_pure(&self) -> bool {
        match self {
            Term::Index(_) | Term::Meta(..) => true,
            Term::App(a, b) => a.is_pure() && b.is_pure(),
            Term::Abs(a) => a.is_pure(),
            Term::Clos(..) => false,
        }
    }

    /// No metavariable anywhere.
    pub fn is_closed_signature(&self) -> bool {
        match self {
            Term::Index(_) => true,
            Term::Meta(..) => false,
            Term::App(a, b) | Term::Clos(a, b) => {
                a.is_closed_signature() && b.is_closed_signature()
            }
            Term::Abs(a) => a.is_closed_signature(),
        }
    }

    /// Plain de Bruijn term: neither closures nor metavariables.
    pub fn is_lambda_db(&self) -> bool {
        self.is_pure() && self.is_closed_signature()
    }
}

/// Named term: variables, abstractions, explicit substitutions
/// `t[x:=u]` and metavariables decorated with a set of names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NamedTerm {
    Var(String),
    App(Box<NamedTerm>, Box<NamedTerm>),
    Abs(String, Box<NamedTerm>),
    /// `body[binder:=subst]`
    ExSub(Box<NamedTerm>, String, Box<NamedTerm>),
    Meta(String, VarSet),
}

impl NamedTerm {
    pub fn var(x: impl Into<String>) -> NamedTerm {
        NamedTerm::Var(x.into())
    }

    pub fn app(l: NamedTerm, r: NamedTerm) -> NamedTerm {
        NamedTerm::App(Box::new(l), Box::new(r))
    }

    pub fn lam(x: impl Into<String>, body: NamedTerm) -> NamedTerm {
        NamedTerm::Abs(x.into(), Box::new(body))
    }

    pub fn exsub(body: NamedTerm, x: impl Into<String>, subst: NamedTerm) -> NamedTerm {
        NamedTerm::ExSub(Box::new(body), x.into(), Box::new(subst))
    }

    pub fn meta(name: impl Into<String>, delta: VarSet) -> NamedTerm {
        NamedTerm::Meta(name.into(), delta)
    }

    pub fn fv(&self) -> VarSet {
        let mut out = VarSet::default();
        self.collect_fv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_fv<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut VarSet) {
        match self {
            NamedTerm::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            NamedTerm::App(a, b) => {
                a.collect_fv(bound, out);
                b.collect_fv(bound, out);
            }
            NamedTerm::Abs(x, body) => {
                bound.push(x);
                body.collect_fv(bound, out);
                bound.pop();
            }
            NamedTerm::ExSub(body, x, subst) => {
                bound.push(x);
                body.collect_fv(bound, out);
                bound.pop();
                subst.collect_fv(bound, out);
            }
            NamedTerm::Meta(_, delta) => {
                for x in delta.iter() {
                    if !bound.contains(&x) {
                        out.insert(x.to_string());
                    }
                }
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            NamedTerm::Var(y) => y == x,
            NamedTerm::App(a, b) => a.has_free(x) || b.has_free(x),
            NamedTerm::Abs(y, body) => y != x && body.has_free(x),
            NamedTerm::ExSub(body, y, subst) => (y != x && body.has_free(x)) || subst.has_free(x),
            NamedTerm::Meta(_, delta) => delta.contains(x),
        }
    }

    /// Every name occurring anywhere, bound or free.
    pub fn all_names(&self) -> VarSet {
        let mut out = VarSet::default();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut VarSet) {
        match self {
            NamedTerm::Var(x) => out.insert(x.clone()),
            NamedTerm::App(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            NamedTerm::Abs(x, body) => {
                out.insert(x.clone());
                body.collect_names(out);
            }
            NamedTerm::ExSub(body, x, subst) => {
                out.insert(x.clone());
                body.collect_names(out);
                subst.collect_names(out);
            }
            NamedTerm::Meta(_, delta) => {
                for x in delta.iter() {
                    out.insert(x.to_string());
                }
            }
        }
    }

    pub fn is_closed_signature(&self) -> bool {
        match self {
            NamedTerm::Var(_) => true,
            NamedTerm::Meta(..) => false,
            NamedTerm::App(a, b) | NamedTerm::ExSub(a, _, b) => {
                a.is_closed_signature() && b.is_closed_signature()
            }
            NamedTerm::Abs(_, a) => a.is_closed_signature(),
        }
    }
}

/// Finite set of variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarSet(BTreeSet<String>);

impl VarSet {
    pub fn new() -> Self {
        VarSet::default()
    }

    pub fn insert(&mut self, x: impl Into<String>) {
        self.0.insert(x.into());
    }

    pub fn contains(&self, x: &str) -> bool {
        self.0.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.union(&other.0).cloned().collect())
    }
}

impl<S: Into<String>> FromIterator<S> for VarSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        VarSet(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Ordered list of names parameterising the translations. May contain
/// duplicates unless checked with [`VarList::check_distinct`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VarList(Vec<String>);

impl VarList {
    pub fn new(names: Vec<String>) -> Self {
        VarList(names)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based lookup.
    pub fn get(&self, j: u32) -> Option<&str> {
        (j as usize).checked_sub(1).and_then(|i| self.0.get(i)).map(String::as_str)
    }

    /// `min { j : x_j = x }`, 1-based.
    pub fn position(&self, x: &str) -> Option<u32> {
        self.0.iter().position(|y| y == x).map(|i| i as u32 + 1)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.0.iter().any(|y| y == x)
    }

    /// `[x, x_1, ..., x_n]`
    pub fn cons(&self, x: &str) -> VarList {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(x.to_string());
        v.extend(self.0.iter().cloned());
        VarList(v)
    }

    /// Inserts `x` so that it becomes element number `slot + 1`.
    pub fn insert_at(&self, slot: usize, x: &str) -> VarList {
        let mut v = self.0.clone();
        v.insert(slot, x.to_string());
        VarList(v)
    }

    /// Exchanges the 1-based elements `i` and `i + 1`.
    pub fn swapped(&self, i: usize) -> VarList {
        let mut v = self.0.clone();
        v.swap(i - 1, i);
        VarList(v)
    }

    pub fn extended(&self, more: &[String]) -> VarList {
        let mut v = self.0.clone();
        v.extend(more.iter().cloned());
        VarList(v)
    }

    /// Returns the first repeated name, if any.
    pub fn check_distinct(&self) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        for x in &self.0 {
            if !seen.insert(x.as_str()) {
                return Err(x.clone());
            }
        }
        Ok(())
    }
}

impl<S: Into<String>> FromIterator<S> for VarList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        VarList(iter.into_iter().map(Into::into).collect())
    }
}

/// Child selector. Labels are fixed so serialized positions replay exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Child {
    Left,
    Right,
    Body,
    Subst,
}

impl Child {
    pub fn label(self) -> &'static str {
        match self {
            Child::Left => "left",
            Child::Right => "right",
            Child::Body => "body",
            Child::Subst => "subst",
        }
    }
}

/// Path from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(pub Vec<Child>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, c: Child) -> Position {
        let mut v = self.0.clone();
        v.push(c);
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", c.label())?;
        }
        Ok(())
    }
}

/// Positional access shared by both term worlds.
pub trait Tree: Sized + Clone {
    fn children(&self) -> Vec<(Child, &Self)>;

    fn with_child(&self, c: Child, new: Self) -> Option<Self>;

    fn child(&self, c: Child) -> Option<&Self> {
        self.children().into_iter().find(|(k, _)| *k == c).map(|(_, t)| t)
    }

    /// Node count.
    fn size(&self) -> usize {
        1 + self.children().iter().map(|(_, t)| t.size()).sum::<usize>()
    }

    fn subterm(&self, p: &Position) -> Option<&Self> {
        let mut cur = self;
        for &c in &p.0 {
            cur = cur.child(c)?;
        }
        Some(cur)
    }

    fn replace_at(&self, p: &Position, new: Self) -> Option<Self> {
        fn go<T: Tree>(t: &T, path: &[Child], new: T) -> Option<T> {
            match path.split_first() {
                None => Some(new),
                Some((&c, rest)) => {
                    let inner = go(t.child(c)?, rest, new)?;
                    t.with_child(c, inner)
                }
            }
        }
        go(self, &p.0, new)
    }

    /// All positions in pre-order, parents before children, left before right.
    fn positions(&self) -> Vec<Position> {
        fn go<T: Tree>(t: &T, here: &mut Vec<Child>, out: &mut Vec<Position>) {
            out.push(Position(here.clone()));
            for (c, s) in t.children() {
                here.push(c);
                go(s, here, out);
                here.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl Tree for Term {
    fn children(&self) -> Vec<(Child, &Self)> {
        match self {
            Term::Index(_) | Term::Meta(..) => vec![],
            Term::App(a, b) => vec![(Child::Left, a), (Child::Right, b)],
            Term::Abs(a) => vec![(Child::Body, a)],
            Term::Clos(a, b) => vec![(Child::Body, a), (Child::Subst, b)],
        }
    }

    fn with_child(&self, c: Child, new: Self) -> Option<Self> {
        Some(match (self, c) {
            (Term::App(_, b), Child::Left) => Term::App(Box::new(new), b.clone()),
            (Term::App(a, _), Child::Right) => Term::App(a.clone(), Box::new(new)),
            (Term::Abs(_), Child::Body) => Term::Abs(Box::new(new)),
            (Term::Clos(_, b), Child::Body) => Term::Clos(Box::new(new), b.clone()),
            (Term::Clos(a, _), Child::Subst) => Term::Clos(a.clone(), Box::new(new)),
            _ => return None,
        })
    }
}

impl Tree for NamedTerm {
    fn children(&self) -> Vec<(Child, &Self)> {
        match self {
            NamedTerm::Var(_) | NamedTerm::Meta(..) => vec![],
            NamedTerm::App(a, b) => vec![(Child::Left, a), (Child::Right, b)],
            NamedTerm::Abs(_, a) => vec![(Child::Body, a)],
            NamedTerm::ExSub(a, _, b) => vec![(Child::Body, a), (Child::Subst, b)],
        }
    }

    fn with_child(&self, c: Child, new: Self) -> Option<Self> {
        Some(match (self, c) {
            (NamedTerm::App(_, b), Child::Left) => NamedTerm::App(Box::new(new), b.clone()),
            (NamedTerm::App(a, _), Child::Right) => NamedTerm::App(a.clone(), Box::new(new)),
            (NamedTerm::Abs(x, _), Child::Body) => NamedTerm::Abs(x.clone(), Box::new(new)),
            (NamedTerm::ExSub(_, x, b), Child::Body) => {
                NamedTerm::ExSub(Box::new(new), x.clone(), b.clone())
            }
            (NamedTerm::ExSub(a, x, _), Child::Subst) => {
                NamedTerm::ExSub(a.clone(), x.clone(), Box::new(new))
            }
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(xs: &[u32]) -> NatSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn fv_indexed() {
        assert_eq!(Term::lam(Term::idx(1)).fv(), ns(&[]));
        let t = Term::lam(Term::app(Term::idx(1), Term::idx(2)));
        assert_eq!(t.fv(), ns(&[1]));
        let c = Term::clos(Term::lam(Term::idx(1)), Term::idx(2));
        assert_eq!(c.fv(), ns(&[2]));
        let m = Term::clos(Term::meta("X", ns(&[1, 3])), Term::idx(4));
        assert_eq!(m.fv(), ns(&[2, 4]));
    }

    #[test]
    fn has_free_agrees_with_fv() {
        let t = Term::clos(
            Term::lam(Term::app(Term::idx(3), Term::meta("X", ns(&[1, 4])))),
            Term::idx(2),
        );
        let fv = t.fv();
        for i in 1..8 {
            assert_eq!(t.has_free(i), fv.contains(i), "index {i}");
        }
    }

    #[test]
    fn fv_named() {
        let x = NamedTerm::var;
        assert!(NamedTerm::lam("x", x("x")).fv().is_empty());
        let t = NamedTerm::exsub(x("x"), "x", x("y"));
        assert_eq!(t.fv(), ["y"].into_iter().collect());
        let t = NamedTerm::exsub(NamedTerm::app(x("x"), x("y")), "y", x("z"));
        assert_eq!(t.fv(), ["x", "z"].into_iter().collect());
        let m = NamedTerm::lam("x", NamedTerm::meta("X", ["x", "y"].into_iter().collect()));
        assert_eq!(m.fv(), ["y"].into_iter().collect());
    }

    #[test]
    fn purity_predicates() {
        let t = Term::app(Term::lam(Term::idx(1)), Term::meta("X", NatSet::new()));
        assert!(t.is_pure());
        assert!(!t.is_closed_signature());
        assert!(!t.is_lambda_db());
        let c = Term::clos(Term::idx(1), Term::idx(2));
        assert!(!c.is_pure());
        assert!(c.is_closed_signature());
    }

    #[test]
    fn positions_and_replacement() {
        let t = Term::app(Term::lam(Term::idx(1)), Term::clos(Term::idx(1), Term::idx(2)));
        let ps = t.positions();
        assert_eq!(ps.len(), t.size());
        assert_eq!(ps[0], Position::root());
        let p = Position(vec![Child::Right, Child::Subst]);
        assert_eq!(t.subterm(&p), Some(&Term::idx(2)));
        let r = t.replace_at(&p, Term::idx(7)).unwrap();
        assert_eq!(r.subterm(&p), Some(&Term::idx(7)));
        assert!(t.subterm(&Position(vec![Child::Subst])).is_none());
        assert!(t.replace_at(&Position(vec![Child::Body]), Term::idx(1)).is_none());
    }

    #[test]
    fn varlist_lookup_uses_first_occurrence() {
        let xs: VarList = ["x", "y", "x"].into_iter().collect();
        assert_eq!(xs.position("x"), Some(1));
        assert_eq!(xs.get(3), Some("x"));
        assert_eq!(xs.get(0), None);
        assert_eq!(xs.check_distinct(), Err("x".to_string()));
        assert_eq!(xs.swapped(1).as_slice(), &["y", "x", "x"]);
    }
}
