use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::term::{Position, Term};

use super::{CalculusId, EngineError, Rewritable, Step};

/// Default bound on the size of an equation class.
pub const DEFAULT_CLASS_CAP: usize = 10_000;

/// Every one-step reduct of `t` under `calc`'s rule table, at every
/// position, in pre-order with rules tried in table order. Equation moves
/// are not steps.
pub fn step_redexes<T: Rewritable>(calc: CalculusId, t: &T) -> Vec<Step<T>> {
    if calc.world() != T::WORLD {
        return Vec::new();
    }
    let mut out = Vec::new();
    for p in t.positions() {
        let sub = t.subterm(&p).expect("position from positions()");
        for &rule in calc.rules() {
            if let Some(contractum) = sub.contract(calc, rule) {
                let after = t.replace_at(&p, contractum).expect("valid position");
                out.push(Step {
                    rule,
                    position: p.clone(),
                    equations: Vec::new(),
                    before: t.clone(),
                    after,
                });
            }
        }
    }
    out
}

/// Breadth-first closure of `{t}` under the world's equation, applied at
/// every position. Members come back in discovery order, `t` first, each
/// with the equation positions that lead to it from `t`. Deduplication
/// is up to [`Rewritable::key`].
pub fn class_members<T: Rewritable>(t: &T, cap: usize) -> Result<Vec<(T, Vec<Position>)>, EngineError> {
    let mut seen = HashSet::new();
    seen.insert(t.key());
    let mut out = vec![(t.clone(), Vec::new())];
    let mut next = 0;
    while next < out.len() {
        let (cur, path) = out[next].clone();
        next += 1;
        for p in cur.positions() {
            if let Some(moved) = cur.equation_at(&p) {
                if seen.insert(moved.key()) {
                    if seen.len() > cap {
                        return Err(EngineError::ClassCapExceeded { cap });
                    }
                    let mut path = path.clone();
                    path.push(p);
                    out.push((moved, path));
                }
            }
        }
    }
    Ok(out)
}

/// The class of `t` as a set of keys (α-canonical forms for named terms).
fn class_keys<T: Rewritable>(t: &T, cap: usize) -> Result<Vec<T>, EngineError> {
    let start = t.key();
    let mut seen: HashSet<T> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut out = vec![start];
    while let Some(cur) = queue.pop_front() {
        for p in cur.positions() {
            if let Some(moved) = cur.equation_at(&p) {
                let k = moved.key();
                if seen.insert(k.clone()) {
                    if seen.len() > cap {
                        return Err(EngineError::ClassCapExceeded { cap });
                    }
                    queue.push_back(k.clone());
                    out.push(k);
                }
            }
        }
    }
    Ok(out)
}

/// The D-equivalence class of an indexed term.
pub fn d_class(a: &Term, cap: usize) -> Result<BTreeSet<Term>, EngineError> {
    Ok(class_keys(a, cap)?.into_iter().collect())
}

/// Least member of the class of `t` under the derived term order; just
/// the key when `calc` does not rewrite modulo an equation.
pub fn canon<T: Rewritable>(calc: CalculusId, t: &T, cap: usize) -> Result<T, EngineError> {
    if calc.modulo().is_none() {
        return Ok(t.key());
    }
    Ok(class_keys(t, cap)?.into_iter().min().expect("class contains t"))
}

fn members_for<T: Rewritable>(calc: CalculusId, t: &T, cap: usize) -> Result<Vec<T>, EngineError> {
    if calc.modulo().is_some() {
        class_keys(t, cap)
    } else {
        Ok(vec![t.key()])
    }
}

/// `{ canon(b') : b ∈ class(t), b → b' }`.
pub fn step_modulo<T: Rewritable>(calc: CalculusId, t: &T, cap: usize) -> Result<BTreeSet<T>, EngineError> {
    let mut out = BTreeSet::new();
    for m in members_for(calc, t, cap)? {
        for s in step_redexes(calc, &m) {
            out.insert(canon(calc, &s.after, cap)?);
        }
    }
    Ok(out)
}

/// No member of the class of `t` has a redex.
pub fn is_normal<T: Rewritable>(calc: CalculusId, t: &T, cap: usize) -> Result<bool, EngineError> {
    Ok(members_for(calc, t, cap)?.iter().all(|m| step_redexes(calc, m).is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::RuleId;
    use crate::syntax::{parse_indexed, parse_named};
    use crate::term::{Child, NamedTerm};

    fn i(s: &str) -> Term {
        parse_indexed(s).unwrap()
    }

    #[test]
    fn step_redexes_examples() {
        let steps = step_redexes(CalculusId::R, &i("(\\ 1) 2"));
        assert_eq!(steps.len(), 1);
        assert_eq!((steps[0].rule, steps[0].after.clone()), (RuleId::Beta, i("2")));
        assert!(steps[0].position.is_root());

        let steps = step_redexes(CalculusId::Rex, &i("1[(\\ 1) 2]"));
        let got: Vec<_> = steps.iter().map(|s| (s.rule, s.position.clone(), s.after.clone())).collect();
        assert_eq!(
            got,
            vec![
                (RuleId::Var, Position::root(), i("(\\ 1) 2")),
                (RuleId::Beta, Position(vec![Child::Subst]), i("1[1[2]]")),
            ]
        );
        assert!(step_redexes(CalculusId::RexSub, &i("(\\ 1) 2")).is_empty());
        // wrong world: no rules
        assert!(step_redexes(CalculusId::X, &i("(\\ 1) 2")).is_empty());
    }

    #[test]
    fn d_class_examples() {
        assert_eq!(d_class(&i("1"), 10).unwrap(), BTreeSet::from([i("1")]));
        assert_eq!(
            d_class(&i("1[2][3]"), 10).unwrap(),
            BTreeSet::from([i("1[2][3]"), i("2[4][1]")])
        );
        assert_eq!(d_class(&i("(\\ 1) 2"), 10).unwrap(), BTreeSet::from([i("(\\ 1) 2")]));
        assert_eq!(
            d_class(&i("1[2][3][4]"), 1),
            Err(EngineError::ClassCapExceeded { cap: 1 })
        );
    }

    #[test]
    fn class_members_carry_paths() {
        let t = i("\\ 1[2][3]");
        let members = class_members(&t, 10).unwrap();
        assert_eq!(members.len(), 2);
        let (m, path) = &members[1];
        let mut cur = t.clone();
        for p in path {
            cur = crate::engine::eqd_apply(&cur, p).unwrap();
        }
        assert_eq!(&cur, m);
    }

    #[test]
    fn step_modulo_sees_class_members() {
        let t = i("1[2][3]");
        let direct: BTreeSet<Term> = step_redexes(CalculusId::RexSub, &t)
            .into_iter()
            .map(|s| canon(CalculusId::RexSub, &s.after, 100).unwrap())
            .collect();
        let modulo = step_modulo(CalculusId::RexSub, &t, 100).unwrap();
        assert!(direct.is_subset(&modulo));
        for s in step_redexes(CalculusId::RexSub, &i("2[4][1]")) {
            assert!(modulo.contains(&canon(CalculusId::RexSub, &s.after, 100).unwrap()));
        }
        let c = canon(CalculusId::Rex, &t, 100).unwrap();
        assert_eq!(canon(CalculusId::Rex, &c, 100).unwrap(), c);
    }

    #[test]
    fn normal_forms() {
        assert!(is_normal(CalculusId::Rex, &i("\\ 1"), 100).unwrap());
        assert!(!is_normal(CalculusId::Rex, &i("1[2]"), 100).unwrap());
        assert!(is_normal(CalculusId::Rex, &i("?X{1}[2]"), 100).unwrap());
        assert!(!is_normal(CalculusId::Rex, &i("?X{2}[2]"), 100).unwrap());
    }

    #[test]
    fn named_modulo_c() {
        let t = parse_named("z[x:=a][y:=b]").unwrap();
        let reducts: BTreeSet<NamedTerm> = step_modulo(CalculusId::Ex, &t, 100).unwrap();
        // both substitutions are garbage, in either order
        assert!(reducts.contains(&canon(CalculusId::Ex, &parse_named("z[x:=a]").unwrap(), 100).unwrap()));
        assert!(reducts.contains(&canon(CalculusId::Ex, &parse_named("z[y:=b]").unwrap(), 100).unwrap()));
    }
}
