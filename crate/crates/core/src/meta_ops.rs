//! Meta-level operators on indexed terms (update, increment, swap,
//! decrement, their stacked forms and the two meta-substitutions) and
//! capture-avoiding substitution on named terms.
//!
//! Increment, swap and decrement are total on every term shape, closures
//! and metavariables included. Update and both meta-substitutions only
//! accept plain de Bruijn terms.

use thiserror::Error;

use crate::alpha::fresh_name;
use crate::natset::NatSet;
use crate::term::{Child, NamedTerm, Position, Term, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaOpError {
    #[error("decrement by {index} is undefined: index {index} occurs free at {position}")]
    DecrementUndefined { index: u32, position: Position },
    #[error("{op} is only defined on terms without closures or metavariables")]
    NotPure { op: &'static str },
    #[error("cannot substitute a non-variable term into metavariable ?{name}")]
    MetaSubstitution { name: String },
}

fn require_db(op: &'static str, a: &Term) -> Result<(), MetaOpError> {
    if a.is_lambda_db() {
        Ok(())
    } else {
        Err(MetaOpError::NotPure { op })
    }
}

/// `U_k^i(a)`: indexes above `k` grow by `i - 1`.
pub fn update(k: u32, i: u32, a: &Term) -> Result<Term, MetaOpError> {
    assert!(i >= 1);
    require_db("update", a)?;
    fn go(k: u32, i: u32, a: &Term) -> Term {
        match a {
            Term::Index(n) if *n <= k => Term::Index(*n),
            Term::Index(n) => Term::Index(n + i - 1),
            Term::App(l, r) => Term::app(go(k, i, l), go(k, i, r)),
            Term::Abs(b) => Term::lam(go(k + 1, i, b)),
            Term::Clos(..) | Term::Meta(..) => unreachable!("checked by require_db"),
        }
    }
    Ok(go(k, i, a))
}

/// `⊕_i(a)`
pub fn increment(i: u32, a: &Term) -> Term {
    match a {
        Term::Index(n) if *n <= i => Term::Index(*n),
        Term::Index(n) => Term::Index(n + 1),
        Term::App(l, r) => Term::app(increment(i, l), increment(i, r)),
        Term::Abs(b) => Term::lam(increment(i + 1, b)),
        Term::Clos(b, s) => Term::clos(increment(i + 1, b), increment(i, s)),
        Term::Meta(x, delta) => Term::Meta(x.clone(), delta.map(|n| if n > i { n + 1 } else { n })),
    }
}

fn swap_index(i: u32, n: u32) -> u32 {
    if n == i {
        i + 1
    } else if n == i + 1 {
        i
    } else {
        n
    }
}

/// `swap_i(a)`: exchanges free indexes `i` and `i + 1`.
pub fn swap(i: u32, a: &Term) -> Term {
    assert!(i >= 1);
    match a {
        Term::Index(n) => Term::Index(swap_index(i, *n)),
        Term::App(l, r) => Term::app(swap(i, l), swap(i, r)),
        Term::Abs(b) => Term::lam(swap(i + 1, b)),
        Term::Clos(b, s) => Term::clos(swap(i + 1, b), swap(i, s)),
        Term::Meta(x, delta) => Term::Meta(x.clone(), delta.map(|n| swap_index(i, n))),
    }
}

/// `⊖_i(a)`, defined iff `i ∉ FV(a)`.
pub fn decrement(i: u32, a: &Term) -> Result<Term, MetaOpError> {
    assert!(i >= 1);
    fn go(i: u32, a: &Term, at: &mut Vec<Child>, origin: u32) -> Result<Term, MetaOpError> {
        let undefined = |at: &Vec<Child>| MetaOpError::DecrementUndefined {
            index: origin,
            position: Position(at.clone()),
        };
        Ok(match a {
            Term::Index(n) if *n < i => Term::Index(*n),
            Term::Index(n) if *n == i => return Err(undefined(at)),
            Term::Index(n) => Term::Index(n - 1),
            Term::App(l, r) => {
                at.push(Child::Left);
                let l = go(i, l, at, origin)?;
                at.pop();
                at.push(Child::Right);
                let r = go(i, r, at, origin)?;
                at.pop();
                Term::app(l, r)
            }
            Term::Abs(b) => {
                at.push(Child::Body);
                let b = go(i + 1, b, at, origin)?;
                at.pop();
                Term::lam(b)
            }
            Term::Clos(b, s) => {
                at.push(Child::Body);
                let b = go(i + 1, b, at, origin)?;
                at.pop();
                at.push(Child::Subst);
                let s = go(i, s, at, origin)?;
                at.pop();
                Term::clos(b, s)
            }
            Term::Meta(x, delta) => {
                if delta.contains(i) {
                    return Err(undefined(at));
                }
                Term::Meta(x.clone(), delta.map(|n| if n > i { n - 1 } else { n }))
            }
        })
    }
    go(i, a, &mut Vec::new(), i)
}

/// `S_i^j(a) = swap_i(swap_{i+1}(... swap_{i+j-1}(a)))`, by the recursion
/// `S_i^j(a) = S_i^{j-1}(swap_{i+j-1}(a))`.
pub fn stacked_swap(i: u32, j: u32, a: &Term) -> Term {
    if j == 0 {
        a.clone()
    } else {
        stacked_swap(i, j - 1, &swap(i + j - 1, a))
    }
}

/// `⊕^i(a)`: `i` successive applications of `⊕_0`.
pub fn stacked_increment(i: u32, a: &Term) -> Term {
    if i == 0 {
        a.clone()
    } else {
        stacked_increment(i - 1, &increment(0, a))
    }
}

/// `a{{n := c}}`, the classical de Bruijn meta-substitution.
pub fn db_subst(a: &Term, n: u32, c: &Term) -> Result<Term, MetaOpError> {
    assert!(n >= 1);
    require_db("db_subst", a)?;
    require_db("db_subst", c)?;
    fn go(a: &Term, n: u32, c: &Term) -> Term {
        match a {
            Term::Index(m) if *m < n => Term::Index(*m),
            Term::Index(m) if *m == n => update(0, n, c).expect("substituent checked"),
            Term::Index(m) => Term::Index(m - 1),
            Term::App(l, r) => Term::app(go(l, n, c), go(r, n, c)),
            Term::Abs(b) => Term::lam(go(b, n + 1, c)),
            Term::Clos(..) | Term::Meta(..) => unreachable!("checked by require_db"),
        }
    }
    Ok(go(a, n, c))
}

/// `a{{c}}`, the swap-based meta-substitution: crossing an abstraction
/// swaps indexes 1 and 2 of the body and increments the substituent.
pub fn r_subst(a: &Term, c: &Term) -> Result<Term, MetaOpError> {
    require_db("r_subst", a)?;
    require_db("r_subst", c)?;
    fn go(a: &Term, c: &Term) -> Term {
        match a {
            Term::Index(1) => c.clone(),
            Term::Index(n) => Term::Index(n - 1),
            Term::App(l, r) => Term::app(go(l, c), go(r, c)),
            Term::Abs(b) => Term::lam(go(&swap(1, b), &increment(0, c))),
            Term::Clos(..) | Term::Meta(..) => unreachable!("checked by require_db"),
        }
    }
    Ok(go(a, c))
}

/// Capture-avoiding `t{x := u}`. Binders that would capture a free name of
/// `u` are renamed with [`fresh_name`]. Substituting a non-variable into a
/// metavariable whose decoration mentions `x` is undefined.
pub fn named_subst(t: &NamedTerm, x: &str, u: &NamedTerm) -> Result<NamedTerm, MetaOpError> {
    let fv_u = u.fv();
    subst_avoiding(t, x, u, &fv_u)
}

/// Renames the free occurrences of `x` to `y`, avoiding capture.
pub fn named_rename(t: &NamedTerm, x: &str, y: &str) -> NamedTerm {
    named_subst(t, x, &NamedTerm::var(y)).expect("renaming is total")
}

fn subst_avoiding(t: &NamedTerm, x: &str, u: &NamedTerm, fv_u: &VarSet) -> Result<NamedTerm, MetaOpError> {
    // Rebuilds a binder `y` over `body`, renaming it when it would capture.
    let under_binder = |y: &String, body: &NamedTerm| -> Result<(String, NamedTerm), MetaOpError> {
        if y == x || !body.has_free(x) {
            return Ok((y.clone(), body.clone()));
        }
        if fv_u.contains(y) {
            let mut avoid = fv_u.union(&body.all_names());
            avoid.insert(x);
            let y2 = fresh_name(y, &avoid);
            let renamed = named_subst_raw(body, y, &NamedTerm::var(y2.clone()));
            Ok((y2, subst_avoiding(&renamed, x, u, fv_u)?))
        } else {
            Ok((y.clone(), subst_avoiding(body, x, u, fv_u)?))
        }
    };
    Ok(match t {
        NamedTerm::Var(y) if y == x => u.clone(),
        NamedTerm::Var(_) => t.clone(),
        NamedTerm::App(a, b) => {
            NamedTerm::app(subst_avoiding(a, x, u, fv_u)?, subst_avoiding(b, x, u, fv_u)?)
        }
        NamedTerm::Abs(y, body) => {
            let (y, body) = under_binder(y, body)?;
            NamedTerm::Abs(y, Box::new(body))
        }
        NamedTerm::ExSub(body, y, s) => {
            let s = subst_avoiding(s, x, u, fv_u)?;
            let (y, body) = under_binder(y, body)?;
            NamedTerm::ExSub(Box::new(body), y, Box::new(s))
        }
        NamedTerm::Meta(name, delta) => {
            if !delta.contains(x) {
                t.clone()
            } else if let NamedTerm::Var(z) = u {
                NamedTerm::Meta(name.clone(), delta.iter().map(|y| if y == x { z.as_str() } else { y }).collect())
            } else {
                return Err(MetaOpError::MetaSubstitution { name: name.clone() });
            }
        }
    })
}

/// Naive replacement of the free occurrences of `x` by `u`: stops at
/// binders of `x` but never renames, so it may capture.
pub fn named_subst_raw(t: &NamedTerm, x: &str, u: &NamedTerm) -> NamedTerm {
    match t {
        NamedTerm::Var(y) if y == x => u.clone(),
        NamedTerm::Var(_) => t.clone(),
        NamedTerm::App(a, b) => NamedTerm::app(named_subst_raw(a, x, u), named_subst_raw(b, x, u)),
        NamedTerm::Abs(y, _) if y == x => t.clone(),
        NamedTerm::Abs(y, body) => NamedTerm::Abs(y.clone(), Box::new(named_subst_raw(body, x, u))),
        NamedTerm::ExSub(body, y, s) => {
            let s = named_subst_raw(s, x, u);
            let body = if y == x { (**body).clone() } else { named_subst_raw(body, x, u) };
            NamedTerm::ExSub(Box::new(body), y.clone(), Box::new(s))
        }
        NamedTerm::Meta(name, delta) => match u {
            NamedTerm::Var(z) if delta.contains(x) => NamedTerm::Meta(
                name.clone(),
                delta.iter().map(|y| if y == x { z.as_str() } else { y }).collect(),
            ),
            _ => t.clone(),
        },
    }
}

/// The set `{1, ..., n}`.
pub fn upto(n: u32) -> NatSet {
    (1..=n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_eq;
    use crate::term::NamedTerm as N;

    fn i(n: u32) -> Term {
        Term::idx(n)
    }
    fn ns(xs: &[u32]) -> NatSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn update_examples() {
        assert_eq!(update(0, 2, &i(3)).unwrap(), i(4));
        assert_eq!(update(2, 5, &i(1)).unwrap(), i(1));
        assert_eq!(update(0, 2, &Term::lam(i(1))).unwrap(), Term::lam(i(1)));
        assert!(matches!(
            update(0, 2, &Term::clos(i(1), i(1))),
            Err(MetaOpError::NotPure { .. })
        ));
    }

    #[test]
    fn increment_examples() {
        assert_eq!(increment(0, &i(2)), i(3));
        assert_eq!(increment(1, &Term::clos(i(1), i(2))), Term::clos(i(1), i(3)));
        assert_eq!(increment(1, &Term::meta("X", ns(&[1, 2]))), Term::meta("X", ns(&[1, 3])));
    }

    #[test]
    fn swap_examples() {
        assert_eq!(swap(1, &Term::app(i(1), i(2))), Term::app(i(2), i(1)));
        assert_eq!(swap(2, &Term::app(i(1), i(2))), Term::app(i(1), i(3)));
        assert_eq!(swap(2, &Term::meta("X", ns(&[1, 2, 3]))), Term::meta("X", ns(&[1, 2, 3])));
        assert_eq!(swap(1, &Term::meta("X", ns(&[1, 3]))), Term::meta("X", ns(&[2, 3])));
    }

    #[test]
    fn decrement_examples() {
        assert_eq!(decrement(1, &i(3)).unwrap(), i(2));
        assert_eq!(
            decrement(1, &i(1)),
            Err(MetaOpError::DecrementUndefined { index: 1, position: Position::root() })
        );
        assert_eq!(decrement(2, &Term::meta("X", ns(&[1, 3]))).unwrap(), Term::meta("X", ns(&[1, 2])));
        let err = decrement(1, &Term::lam(Term::app(i(1), i(2)))).unwrap_err();
        assert_eq!(
            err,
            MetaOpError::DecrementUndefined {
                index: 1,
                position: Position(vec![Child::Body, Child::Right])
            }
        );
        assert!(decrement(1, &Term::meta("X", ns(&[1]))).is_err());
    }

    #[test]
    fn stacked_examples() {
        let a = Term::app(i(3), Term::lam(i(4)));
        assert_eq!(stacked_swap(1, 0, &a), a);
        assert_eq!(stacked_swap(1, 1, &i(2)), i(1));
        assert_eq!(stacked_swap(1, 2, &i(3)), i(1));
        assert_eq!(stacked_increment(0, &a), a);
        assert_eq!(stacked_increment(1, &i(2)), i(3));
        assert_eq!(stacked_increment(2, &i(1)), i(3));
    }

    #[test]
    fn db_subst_examples() {
        let c = Term::lam(Term::app(i(1), i(3)));
        assert_eq!(db_subst(&i(1), 1, &c).unwrap(), c);
        let a = Term::lam(Term::app(i(1), i(2)));
        assert_eq!(db_subst(&a, 1, &i(3)).unwrap(), Term::lam(Term::app(i(1), i(4))));
        assert_eq!(db_subst(&i(3), 2, &c).unwrap(), i(2));
    }

    #[test]
    fn r_subst_examples() {
        let c = Term::lam(Term::app(i(1), i(3)));
        assert_eq!(r_subst(&i(1), &c).unwrap(), c);
        let a = Term::lam(Term::app(i(1), i(2)));
        assert_eq!(r_subst(&a, &i(3)).unwrap(), Term::lam(Term::app(i(1), i(4))));
        assert_eq!(r_subst(&i(2), &c).unwrap(), i(1));
        assert!(r_subst(&Term::meta("X", NatSet::new()), &i(1)).is_err());
    }

    #[test]
    fn named_subst_examples() {
        let v = N::var;
        assert_eq!(named_subst(&v("x"), "x", &v("u")).unwrap(), v("u"));
        let r = named_subst(&N::lam("y", v("x")), "x", &v("y")).unwrap();
        assert_eq!(r, N::lam("y'", v("y")));
        assert!(alpha_eq(&r, &N::lam("z", v("y"))));
        let id = N::lam("y", v("y"));
        assert_eq!(named_subst(&id, "x", &v("u")).unwrap(), id);
    }

    #[test]
    fn named_subst_exsub_scopes() {
        let v = N::var;
        // x in the substituent is free, x in the body is bound
        let t = N::exsub(v("x"), "x", v("x"));
        assert_eq!(named_subst(&t, "x", &v("z")).unwrap(), N::exsub(v("x"), "x", v("z")));
        // capture through an explicit substitution binder
        let t = N::exsub(N::app(v("y"), v("x")), "y", v("w"));
        let r = named_subst(&t, "x", &v("y")).unwrap();
        assert_eq!(r, N::exsub(N::app(v("y'"), v("y")), "y'", v("w")));
    }

    #[test]
    fn named_subst_metavariables() {
        let m = N::meta("X", ["x", "z"].into_iter().collect());
        let r = named_subst(&m, "x", &N::var("y")).unwrap();
        assert_eq!(r, N::meta("X", ["y", "z"].into_iter().collect()));
        assert!(matches!(
            named_subst(&m, "x", &N::lam("q", N::var("q"))),
            Err(MetaOpError::MetaSubstitution { .. })
        ));
        assert_eq!(named_subst(&m, "w", &N::lam("q", N::var("q"))).unwrap(), m);
    }

    #[test]
    fn raw_substitution_captures() {
        let t = N::lam("y", N::var("x"));
        assert_eq!(named_subst_raw(&t, "x", &N::var("y")), N::lam("y", N::var("y")));
    }
}
