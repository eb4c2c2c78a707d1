//! α-equivalence for named terms, an α-canonical representative, and
//! deterministic fresh names.

use crate::term::{NamedTerm, VarSet};

/// How a name occurrence resolves: to the binder at some depth, or free.
#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Resolved<'a> {
    Bound(usize),
    Free(&'a str),
}

fn resolve<'a>(env: &[&'a str], x: &'a str) -> Resolved<'a> {
    match env.iter().rposition(|y| *y == x) {
        Some(level) => Resolved::Bound(level),
        None => Resolved::Free(x),
    }
}

/// True iff `t` and `u` are α-convertible. Both `λx.t` and `t[x:=u]`
/// bind `x` (the latter only in `t`).
pub fn alpha_eq(t: &NamedTerm, u: &NamedTerm) -> bool {
    fn go<'a>(t: &'a NamedTerm, u: &'a NamedTerm, et: &mut Vec<&'a str>, eu: &mut Vec<&'a str>) -> bool {
        match (t, u) {
            (NamedTerm::Var(x), NamedTerm::Var(y)) => resolve(et, x) == resolve(eu, y),
            (NamedTerm::App(a, b), NamedTerm::App(c, d)) => go(a, c, et, eu) && go(b, d, et, eu),
            (NamedTerm::Abs(x, a), NamedTerm::Abs(y, b)) => {
                et.push(x);
                eu.push(y);
                let r = go(a, b, et, eu);
                et.pop();
                eu.pop();
                r
            }
            (NamedTerm::ExSub(a, x, s), NamedTerm::ExSub(b, y, r)) => {
                if !go(s, r, et, eu) {
                    return false;
                }
                et.push(x);
                eu.push(y);
                let ok = go(a, b, et, eu);
                et.pop();
                eu.pop();
                ok
            }
            (NamedTerm::Meta(m, d1), NamedTerm::Meta(n, d2)) => {
                if m != n || d1.len() != d2.len() {
                    return false;
                }
                let mut l: Vec<Resolved> = d1.iter().map(|x| resolve(et, x)).collect();
                let mut r: Vec<Resolved> = d2.iter().map(|x| resolve(eu, x)).collect();
                l.sort();
                r.sort();
                l == r
            }
            _ => false,
        }
    }
    go(t, u, &mut Vec::new(), &mut Vec::new())
}

/// Prefix of the names given to binders by [`alpha_canon`]. It cannot
/// start an identifier of the concrete syntax, so no free name clashes.
pub const CANON_PREFIX: char = '#';

/// Renames every binder to `#d`, where `d` is the number of binders in
/// scope at that point. Two terms are α-equal iff their canonical forms
/// are syntactically equal.
pub fn alpha_canon(t: &NamedTerm) -> NamedTerm {
    fn name(level: usize) -> String {
        format!("{CANON_PREFIX}{level}")
    }
    fn go(t: &NamedTerm, env: &mut Vec<(String, String)>) -> NamedTerm {
        let lookup = |env: &Vec<(String, String)>, x: &str| -> String {
            env.iter()
                .rev()
                .find(|(orig, _)| orig == x)
                .map(|(_, new)| new.clone())
                .unwrap_or_else(|| x.to_string())
        };
        match t {
            NamedTerm::Var(x) => NamedTerm::Var(lookup(env, x)),
            NamedTerm::App(a, b) => NamedTerm::app(go(a, env), go(b, env)),
            NamedTerm::Abs(x, a) => {
                let fresh = name(env.len());
                env.push((x.clone(), fresh.clone()));
                let body = go(a, env);
                env.pop();
                NamedTerm::Abs(fresh, Box::new(body))
            }
            NamedTerm::ExSub(a, x, s) => {
                let subst = go(s, env);
                let fresh = name(env.len());
                env.push((x.clone(), fresh.clone()));
                let body = go(a, env);
                env.pop();
                NamedTerm::ExSub(Box::new(body), fresh, Box::new(subst))
            }
            NamedTerm::Meta(m, delta) => {
                NamedTerm::Meta(m.clone(), delta.iter().map(|x| lookup(env, x)).collect())
            }
        }
    }
    go(t, &mut Vec::new())
}

/// Smallest of `base'`, `base''`, ... not in `avoid`.
pub fn fresh_name(base: &str, avoid: &VarSet) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Renames binders so that no two binders share a name and no binder
/// shadows a free name. The result is α-equal to the input.
pub fn rename_apart(t: &NamedTerm) -> NamedTerm {
    fn go(t: &NamedTerm, env: &mut Vec<(String, String)>, used: &mut VarSet) -> NamedTerm {
        let lookup = |env: &Vec<(String, String)>, x: &str| -> String {
            env.iter()
                .rev()
                .find(|(orig, _)| orig == x)
                .map(|(_, new)| new.clone())
                .unwrap_or_else(|| x.to_string())
        };
        let bind = |x: &str, used: &mut VarSet| -> String {
            let new = if used.contains(x) { fresh_name(x, used) } else { x.to_string() };
            used.insert(new.clone());
            new
        };
        match t {
            NamedTerm::Var(x) => NamedTerm::Var(lookup(env, x)),
            NamedTerm::App(a, b) => {
                let l = go(a, env, used);
                NamedTerm::app(l, go(b, env, used))
            }
            NamedTerm::Abs(x, a) => {
                let new = bind(x, used);
                env.push((x.clone(), new.clone()));
                let body = go(a, env, used);
                env.pop();
                NamedTerm::Abs(new, Box::new(body))
            }
            NamedTerm::ExSub(a, x, s) => {
                let subst = go(s, env, used);
                let new = bind(x, used);
                env.push((x.clone(), new.clone()));
                let body = go(a, env, used);
                env.pop();
                NamedTerm::ExSub(Box::new(body), new, Box::new(subst))
            }
            NamedTerm::Meta(m, delta) => {
                NamedTerm::Meta(m.clone(), delta.iter().map(|x| lookup(env, x)).collect())
            }
        }
    }
    let mut used = t.fv();
    go(t, &mut Vec::new(), &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::NamedTerm as N;

    fn v(x: &str) -> N {
        N::var(x)
    }

    #[test]
    fn examples() {
        assert!(alpha_eq(&N::lam("x", v("x")), &N::lam("y", v("y"))));
        assert!(alpha_eq(&N::exsub(v("x"), "x", v("z")), &N::exsub(v("y"), "y", v("z"))));
        assert!(!alpha_eq(&N::lam("x", v("y")), &N::lam("x", v("z"))));
    }

    #[test]
    fn free_versus_bound() {
        // λx.y is not λy.y
        assert!(!alpha_eq(&N::lam("x", v("y")), &N::lam("y", v("y"))));
        // the substituent is outside the binder's scope
        let t = N::exsub(v("y"), "x", v("x"));
        let u = N::exsub(v("y"), "z", v("z"));
        assert!(!alpha_eq(&t, &u));
    }

    #[test]
    fn shadowing() {
        let t = N::lam("x", N::lam("x", v("x")));
        let u = N::lam("y", N::lam("z", v("z")));
        let w = N::lam("y", N::lam("z", v("y")));
        assert!(alpha_eq(&t, &u));
        assert!(!alpha_eq(&t, &w));
    }

    #[test]
    fn metavariable_decorations() {
        let t = N::lam("x", N::meta("X", ["x", "w"].into_iter().collect()));
        let u = N::lam("y", N::meta("X", ["w", "y"].into_iter().collect()));
        let z = N::lam("y", N::meta("X", ["w", "x"].into_iter().collect()));
        assert!(alpha_eq(&t, &u));
        assert!(!alpha_eq(&t, &z));
        assert_eq!(alpha_canon(&t), alpha_canon(&u));
    }

    #[test]
    fn canon_matches_alpha_eq() {
        let t = N::exsub(N::lam("x", N::app(v("x"), v("y"))), "y", v("y"));
        let u = N::exsub(N::lam("q", N::app(v("q"), v("p"))), "p", v("y"));
        assert!(alpha_eq(&t, &u));
        assert_eq!(alpha_canon(&t), alpha_canon(&u));
        assert!(alpha_eq(&alpha_canon(&t), &t));
    }

    #[test]
    fn fresh_names() {
        let avoid: VarSet = ["y'", "y''"].into_iter().collect();
        assert_eq!(fresh_name("y", &avoid), "y'''");
        assert_eq!(fresh_name("x", &avoid), "x'");
    }

    #[test]
    fn rename_apart_is_alpha_equal() {
        let t = N::app(N::lam("x", N::lam("x", v("x"))), N::lam("y", N::app(v("x"), v("y"))));
        let r = rename_apart(&t);
        assert!(alpha_eq(&t, &r));
        assert_eq!(r.to_string(), "(\\x'. \\x''. x'') (\\y. x y)");
    }
}
