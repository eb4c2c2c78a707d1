//! Randomised laws, shrinking to small counterexamples.

use proptest::prelude::*;

use rexlab::alpha::alpha_eq;
use rexlab::engine::{canon, eqd_apply, normalize, replay, Trace, TraceJson, DEFAULT_CLASS_CAP};
use rexlab::meta_ops::{db_subst, decrement, increment, r_subst, stacked_increment, swap};
use rexlab::term::Tree;
use rexlab::translate::{u_uniform, w_uniform};
use rexlab::{parse_indexed, parse_named, CalculusId, NamedTerm, NatSet, Position, Strategy as Order, Term};

fn leaf(max_free: u32) -> BoxedStrategy<Term> {
    (1..=max_free).prop_map(Term::idx).boxed()
}

fn pure(max_free: u32) -> impl Strategy<Value = Term> {
    leaf(max_free).prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::lam),
            (inner.clone(), inner).prop_map(|(l, r)| Term::app(l, r)),
        ]
    })
}

fn with_closures(max_free: u32, metas: bool) -> impl Strategy<Value = Term> {
    let meta = proptest::collection::btree_set(1..=3u32, 0..=2)
        .prop_map(|d| Term::meta("X", NatSet::from_iter_checked(d)));
    let base = if metas { prop_oneof![3 => leaf(max_free), 1 => meta].boxed() } else { leaf(max_free) };
    base.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::lam),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::app(l, r)),
            (inner.clone(), inner).prop_map(|(b, s)| Term::clos(b, s)),
        ]
    })
}

fn name(range: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = String> {
    range.prop_map(|i| format!("x{i}"))
}

fn named() -> impl Strategy<Value = NamedTerm> {
    name(1..=3).prop_map(NamedTerm::var).prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (name(1..=4), inner.clone()).prop_map(|(x, b)| NamedTerm::lam(x, b)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| NamedTerm::app(l, r)),
            (inner.clone(), name(1..=4), inner).prop_map(|(b, x, s)| NamedTerm::exsub(b, x, s)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity(a in with_closures(4, true), t in named()) {
        prop_assert_eq!(parse_indexed(&a.to_string()).unwrap(), a);
        prop_assert_eq!(parse_named(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn named_then_indexed_is_identity(a in with_closures(4, false)) {
        prop_assert_eq!(w_uniform(&u_uniform(&a)).unwrap(), a);
    }

    #[test]
    fn indexed_then_named_is_alpha_identity(t in named()) {
        let back = u_uniform(&w_uniform(&t).unwrap());
        prop_assert!(alpha_eq(&back, &t), "{} came back as {}", t, back);
    }

    #[test]
    fn swap_is_an_involution(i in 1..4u32, a in with_closures(4, true)) {
        prop_assert_eq!(swap(i, &swap(i, &a)), a);
    }

    #[test]
    fn swap_permutes_free_indices(i in 1..4u32, a in with_closures(4, false)) {
        let moved = a.fv().map(|n| if n == i { i + 1 } else if n == i + 1 { i } else { n });
        prop_assert_eq!(swap(i, &a).fv(), moved);
    }

    #[test]
    fn decrement_undoes_increment(i in 0..4u32, a in with_closures(4, true)) {
        prop_assert_eq!(decrement(i + 1, &increment(i, &a)).unwrap(), a);
    }

    #[test]
    fn stacked_increment_zero_is_identity(a in with_closures(4, true)) {
        prop_assert_eq!(stacked_increment(0, &a), a);
    }

    #[test]
    fn one_level_substitutions_agree(a in pure(4), b in pure(4)) {
        prop_assert_eq!(db_subst(&a, 1, &b).unwrap(), r_subst(&a, &b).unwrap());
    }

    #[test]
    fn d_move_is_an_involution(x in with_closures(3, true), y in with_closures(3, true), z in with_closures(3, true)) {
        let a = Term::clos(Term::clos(x, y), z);
        let root = Position::root();
        if let Some(moved) = eqd_apply(&a, &root) {
            prop_assert_eq!(eqd_apply(&moved, &root), Some(a.clone()));
            prop_assert_eq!(moved.size(), a.size());
            prop_assert_eq!(moved.fv(), a.fv());
        }
    }

    #[test]
    fn traces_replay_and_survive_json(a in with_closures(3, false)) {
        for strategy in [Order::LeftmostOutermost, Order::RightmostInnermost] {
            let Ok(trace) = normalize(CalculusId::Rex, strategy, &a, 60, DEFAULT_CLASS_CAP) else { continue };
            prop_assert!(replay(&trace).is_ok());
            let json = serde_json::to_string(&TraceJson::from(&trace)).unwrap();
            let back: Trace<Term> = serde_json::from_str::<TraceJson>(&json).unwrap().to_trace().unwrap();
            prop_assert_eq!(back, trace);
        }
    }

    #[test]
    fn strategies_reach_the_same_normal_form(a in pure(3)) {
        let lo = normalize(CalculusId::Rex, Order::LeftmostOutermost, &a, 200, DEFAULT_CLASS_CAP);
        let ri = normalize(CalculusId::Rex, Order::RightmostInnermost, &a, 200, DEFAULT_CLASS_CAP);
        if let (Ok(lo), Ok(ri)) = (lo, ri) {
            let c = |t: &Term| canon(CalculusId::Rex, t, DEFAULT_CLASS_CAP).unwrap();
            prop_assert_eq!(c(&lo.result), c(&ri.result));
        }
    }
}
