use crate::alpha::fresh_name;
use crate::meta_ops::{db_subst, decrement, increment, named_subst_raw, r_subst, swap};
use crate::term::{NamedTerm, Position, Term, Tree};

use super::{CalculusId, Rewritable, RuleId};

/// Contractum of `rule` at the root of `t`, or `None` if the pattern or
/// its side condition fails. Indexed Beta yields the closure `a[b]`.
pub fn apply_rule_at_root<T: Rewritable>(rule: RuleId, t: &T) -> Option<T> {
    t.apply_rule_at_root(rule)
}

pub(super) fn contract_indexed(calc: CalculusId, rule: RuleId, a: &Term) -> Option<Term> {
    match (calc, rule, a) {
        (CalculusId::DB, RuleId::Beta, Term::App(l, d)) => match &**l {
            Term::Abs(c) => db_subst(c, 1, d).ok(),
            _ => None,
        },
        (CalculusId::R, RuleId::Beta, Term::App(l, d)) => match &**l {
            Term::Abs(c) => r_subst(c, d).ok(),
            _ => None,
        },
        (CalculusId::DB | CalculusId::R, _, _) => None,
        _ => apply_indexed(rule, a),
    }
}

pub(super) fn apply_indexed(rule: RuleId, a: &Term) -> Option<Term> {
    match rule {
        RuleId::Beta => match a {
            Term::App(l, b) => match &**l {
                Term::Abs(body) => Some(Term::Clos(body.clone(), b.clone())),
                _ => None,
            },
            _ => None,
        },
        RuleId::App => match a {
            Term::Clos(body, c) => match &**body {
                Term::App(l, r) => Some(Term::app(
                    Term::Clos(l.clone(), c.clone()),
                    Term::Clos(r.clone(), c.clone()),
                )),
                _ => None,
            },
            _ => None,
        },
        RuleId::Lamb => match a {
            Term::Clos(body, c) => match &**body {
                Term::Abs(inner) => Some(Term::lam(Term::clos(swap(1, inner), increment(0, c)))),
                _ => None,
            },
            _ => None,
        },
        RuleId::Var => match a {
            Term::Clos(body, c) if **body == Term::Index(1) => Some((**c).clone()),
            _ => None,
        },
        RuleId::VarR => match a {
            Term::Clos(body, _) => match **body {
                Term::Index(n) if n >= 2 => Some(Term::Index(n - 1)),
                _ => None,
            },
            _ => None,
        },
        RuleId::GC => match a {
            Term::Clos(body, _) if !body.has_free(1) => {
                Some(decrement(1, body).expect("1 is not free, so the decrement is defined"))
            }
            _ => None,
        },
        RuleId::Comp => match a {
            Term::Clos(inner, c) => match &**inner {
                Term::Clos(x, b) if b.has_free(1) => Some(Term::clos(
                    Term::clos(swap(1, x), increment(0, c)),
                    Term::Clos(b.clone(), c.clone()),
                )),
                _ => None,
            },
            _ => None,
        },
        RuleId::EqDLR | RuleId::EqDRL => eqd_apply(a, &Position::root()),
        _ => None,
    }
}

/// The D equation at `p`: `x[y][z] = swap_1(x)[⊕_0(z)][⊖_1(y)]` when
/// `1 ∉ FV(y)`. The map is its own inverse, so both orientations of the
/// equation are this single function.
pub fn eqd_apply(a: &Term, p: &Position) -> Option<Term> {
    let sub = a.subterm(p)?;
    let Term::Clos(inner, z) = sub else { return None };
    let Term::Clos(x, y) = &**inner else { return None };
    if y.has_free(1) {
        return None;
    }
    let y = decrement(1, y).expect("1 is not free");
    let moved = Term::clos(Term::clos(swap(1, x), increment(0, z)), y);
    a.replace_at(p, moved)
}

/// The C equation at `p`: `t[x:=u][y:=v] = t[y:=v][x:=u]` when `x ≠ y`,
/// `y ∉ fv(u)` and `x ∉ fv(v)`.
pub fn eqc_apply(t: &NamedTerm, p: &Position) -> Option<NamedTerm> {
    let sub = t.subterm(p)?;
    let NamedTerm::ExSub(inner, y, v) = sub else { return None };
    let NamedTerm::ExSub(body, x, u) = &**inner else { return None };
    if x == y || u.has_free(y) || v.has_free(x) {
        return None;
    }
    let moved = NamedTerm::ExSub(
        Box::new(NamedTerm::ExSub(body.clone(), y.clone(), v.clone())),
        x.clone(),
        u.clone(),
    );
    t.replace_at(p, moved)
}

/// Renames binder `y` of `body` to a name fresh for `body`, `avoid` and `extra`.
fn rebind(y: &str, body: &NamedTerm, avoid: &[&NamedTerm], extra: &[&str]) -> (String, NamedTerm) {
    let mut names = body.all_names();
    for t in avoid {
        names = names.union(&t.fv());
    }
    for x in extra {
        names.insert(*x);
    }
    let y2 = fresh_name(y, &names);
    let renamed = named_subst_raw(body, y, &NamedTerm::var(y2.clone()));
    (y2, renamed)
}

pub(super) fn apply_named(rule: RuleId, t: &NamedTerm) -> Option<NamedTerm> {
    use NamedTerm as N;
    match rule {
        RuleId::NBeta => match t {
            N::App(l, u) => match &**l {
                N::Abs(x, body) => Some(N::ExSub(body.clone(), x.clone(), u.clone())),
                _ => None,
            },
            _ => None,
        },
        RuleId::NApp => match t {
            N::ExSub(body, x, u) => match &**body {
                N::App(l, r) => Some(N::app(
                    N::ExSub(l.clone(), x.clone(), u.clone()),
                    N::ExSub(r.clone(), x.clone(), u.clone()),
                )),
                _ => None,
            },
            _ => None,
        },
        RuleId::NLamb => match t {
            N::ExSub(body, x, u) => match &**body {
                N::Abs(y, inner) => {
                    // variable convention: the binder must not capture in u nor equal x
                    let (y, inner) = if y == x || u.has_free(y) {
                        rebind(y, inner, &[u], &[x])
                    } else {
                        (y.clone(), (**inner).clone())
                    };
                    Some(N::Abs(y, Box::new(N::ExSub(Box::new(inner), x.clone(), u.clone()))))
                }
                _ => None,
            },
            _ => None,
        },
        RuleId::NVar => match t {
            N::ExSub(body, x, u) => match &**body {
                N::Var(y) if y == x => Some((**u).clone()),
                _ => None,
            },
            _ => None,
        },
        RuleId::NVarGC => match t {
            N::ExSub(body, x, _) => match &**body {
                N::Var(y) if y != x => Some(N::Var(y.clone())),
                _ => None,
            },
            _ => None,
        },
        RuleId::NGc => match t {
            N::ExSub(body, x, _) if !body.has_free(x) => Some((**body).clone()),
            _ => None,
        },
        RuleId::NComp => match t {
            N::ExSub(inner, y, v) => match &**inner {
                N::ExSub(body, x, u) if u.has_free(y) => {
                    let (x, body) = if x == y || v.has_free(x) {
                        rebind(x, body, &[u, v], &[y])
                    } else {
                        (x.clone(), (**body).clone())
                    };
                    Some(N::exsub(
                        N::ExSub(Box::new(body), y.clone(), v.clone()),
                        x,
                        N::ExSub(u.clone(), y.clone(), v.clone()),
                    ))
                }
                _ => None,
            },
            _ => None,
        },
        RuleId::EqC => eqc_apply(t, &Position::root()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_eq;
    use crate::syntax::{parse_indexed, parse_named};
    use crate::term::Child;

    fn i(s: &str) -> Term {
        parse_indexed(s).unwrap()
    }
    fn n(s: &str) -> NamedTerm {
        parse_named(s).unwrap()
    }

    #[test]
    fn indexed_rule_examples() {
        assert_eq!(apply_indexed(RuleId::Beta, &i("(\\ 1) 2")), Some(i("1[2]")));
        assert_eq!(apply_indexed(RuleId::Comp, &i("1[1][2]")), Some(i("2[3][1[2]]")));
        assert_eq!(apply_indexed(RuleId::GC, &i("(\\ 1)[5]")), Some(i("\\ 1")));
        assert_eq!(apply_indexed(RuleId::VarR, &i("3[\\ 1]")), Some(i("2")));
        assert_eq!(apply_indexed(RuleId::VarR, &i("1[2]")), None);
        assert_eq!(apply_indexed(RuleId::Var, &i("1[\\ 1]")), Some(i("\\ 1")));
        assert_eq!(apply_indexed(RuleId::App, &i("(1 2)[3]")), Some(i("1[3] 2[3]")));
        assert_eq!(apply_indexed(RuleId::Lamb, &i("(\\ 1 2)[3]")), Some(i("\\ (2 1)[4]")));
        assert_eq!(apply_indexed(RuleId::GC, &i("1[2]")), None);
        assert_eq!(apply_indexed(RuleId::Comp, &i("1[2][3]")), None);
    }

    #[test]
    fn metavariable_closures() {
        // 1 ∈ Δ blocks GC; nothing else matches a metavariable body
        let t = i("?X{1}[2]");
        for r in CalculusId::Rex.rules() {
            assert_eq!(apply_indexed(*r, &t), None, "{r}");
        }
        assert_eq!(apply_indexed(RuleId::GC, &i("?X{2,3}[1]")), Some(i("?X{1,2}")));
    }

    #[test]
    fn meta_substitution_beta() {
        let t = i("(\\ \\ 2 1) 3");
        assert_eq!(contract_indexed(CalculusId::DB, RuleId::Beta, &t), Some(i("\\ 4 1")));
        assert_eq!(contract_indexed(CalculusId::R, RuleId::Beta, &t), Some(i("\\ 4 1")));
        assert_eq!(contract_indexed(CalculusId::Re, RuleId::Beta, &t), Some(i("(\\ 2 1)[3]")));
        // meta-substitutions reject closures
        assert_eq!(contract_indexed(CalculusId::R, RuleId::Beta, &i("(\\ 1) 2[3]")), None);
        assert_eq!(contract_indexed(CalculusId::R, RuleId::App, &i("(1 2)[3]")), None);
    }

    #[test]
    fn eqd_examples() {
        let t = i("1[2][3]");
        let moved = eqd_apply(&t, &Position::root()).unwrap();
        assert_eq!(moved, i("2[4][1]"));
        assert_eq!(eqd_apply(&moved, &Position::root()), Some(t));
        assert_eq!(eqd_apply(&i("1[1][3]"), &Position::root()), None);
        let nested = i("\\ 1[2][3]");
        assert_eq!(eqd_apply(&nested, &Position(vec![Child::Body])), Some(i("\\ 2[4][1]")));
        assert_eq!(eqd_apply(&nested, &Position::root()), None);
    }

    #[test]
    fn eqc_examples() {
        let t = n("t[x:=u][y:=v]");
        let moved = eqc_apply(&t, &Position::root()).unwrap();
        assert_eq!(moved, n("t[y:=v][x:=u]"));
        assert_eq!(eqc_apply(&moved, &Position::root()), Some(t));
        assert_eq!(eqc_apply(&n("x[x:=y][z:=y]"), &Position::root()), Some(n("x[z:=y][x:=y]")));
        assert_eq!(eqc_apply(&n("t[x:=y][y:=v]"), &Position::root()), None);
        assert_eq!(eqc_apply(&n("t[x:=u][y:=x]"), &Position::root()), None);
        assert_eq!(eqc_apply(&n("t[x:=u][x:=v]"), &Position::root()), None);
    }

    #[test]
    fn named_rules() {
        assert_eq!(apply_named(RuleId::NBeta, &n("(\\x. x) y")), Some(n("x[x:=y]")));
        assert_eq!(apply_named(RuleId::NVar, &n("x[x:=y]")), Some(n("y")));
        assert_eq!(apply_named(RuleId::NVarGC, &n("z[x:=y]")), Some(n("z")));
        assert_eq!(apply_named(RuleId::NVarGC, &n("x[x:=y]")), None);
        assert_eq!(apply_named(RuleId::NGc, &n("(\\x. x)[x:=y]")), Some(n("\\x. x")));
        assert_eq!(apply_named(RuleId::NApp, &n("(f x)[x:=y]")), Some(n("f[x:=y] x[x:=y]")));
        assert_eq!(apply_named(RuleId::NLamb, &n("(\\z. x)[x:=y]")), Some(n("\\z. x[x:=y]")));
        assert_eq!(
            apply_named(RuleId::NComp, &n("t[x:=y][y:=v]")),
            Some(n("t[y:=v][x:=y[y:=v]]"))
        );
    }

    #[test]
    fn named_lamb_avoids_capture() {
        let r = apply_named(RuleId::NLamb, &n("(\\y. x y)[x:=y]")).unwrap();
        assert_eq!(r, n("\\y'. (x y')[x:=y]"));
        let r = apply_named(RuleId::NLamb, &n("(\\x. x)[x:=y]")).unwrap();
        assert!(alpha_eq(&r, &n("\\q. q[x:=y]")));
    }

    #[test]
    fn named_comp_renames_inner_binder() {
        // x is free in the outer substituent: rename the inner binder first
        let r = apply_named(RuleId::NComp, &n("(x y)[x:=y][y:=x]")).unwrap();
        assert!(alpha_eq(&r, &n("(q y)[y:=x][q:=y[y:=x]]")), "{r}");
        // same binder name twice
        let r = apply_named(RuleId::NComp, &n("(x z)[x:=x][x:=w]")).unwrap();
        assert!(alpha_eq(&r, &n("(q z)[x:=w][q:=x[x:=w]]")), "{r}");
    }
}
