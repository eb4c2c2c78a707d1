use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::natset::NatSet;
use crate::syntax::World;
use crate::term::{NamedTerm, Term, VarSet};
use crate::translate::VarEnumeration;

/// The single metavariable name used by generated terms.
pub const META_NAME: &str = "X";

/// Which terms to enumerate or sample. Sizes count nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumSpec {
    pub world: World,
    pub max_size: usize,
    /// Free indexes `1..=fv_bound`, or the first `fv_bound` enumeration names.
    pub fv_bound: u32,
    pub allow_closures: bool,
    pub allow_metavars: bool,
    pub max_delta: usize,
}

impl EnumSpec {
    pub fn indexed(max_size: usize, fv_bound: u32) -> Self {
        EnumSpec {
            world: World::Indexed,
            max_size,
            fv_bound,
            allow_closures: false,
            allow_metavars: false,
            max_delta: 0,
        }
    }

    pub fn named(max_size: usize, fv_bound: u32) -> Self {
        EnumSpec { world: World::Named, ..Self::indexed(max_size, fv_bound) }
    }

    pub fn closures(self, on: bool) -> Self {
        EnumSpec { allow_closures: on, ..self }
    }

    /// Enables metavariables with decorations of at most `max_delta` names.
    pub fn metavars(self, max_delta: usize) -> Self {
        EnumSpec { allow_metavars: true, max_delta, ..self }
    }
}

/// A term of either world.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AnyTerm {
    Indexed(Term),
    Named(NamedTerm),
}

impl fmt::Display for AnyTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyTerm::Indexed(t) => t.fmt(f),
            AnyTerm::Named(t) => t.fmt(f),
        }
    }
}

/// All terms satisfying `spec`, by increasing size, each exactly once.
pub fn enumerate(spec: &EnumSpec) -> Vec<AnyTerm> {
    match spec.world {
        World::Indexed => enumerate_indexed(spec).into_iter().map(AnyTerm::Indexed).collect(),
        World::Named => enumerate_named(spec).into_iter().map(AnyTerm::Named).collect(),
    }
}

/// Subsets of `items` with at most `k` elements, smallest first.
fn small_subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![(Vec::new(), 0usize)];
    for _ in 0..k.min(items.len()) {
        let mut next = Vec::new();
        for (set, from) in &layer {
            for (j, x) in items.iter().enumerate().skip(*from) {
                let mut s: Vec<T> = set.clone();
                s.push(x.clone());
                out.push(s.clone());
                next.push((s, j + 1));
            }
        }
        layer = next;
    }
    out
}

struct IndexedGen<'a> {
    spec: &'a EnumSpec,
    memo: HashMap<(usize, u32), Rc<Vec<Term>>>,
}

impl IndexedGen<'_> {
    /// Terms of exactly size `s` with free indexes in `1..=m`.
    fn of_size(&mut self, s: usize, m: u32) -> Rc<Vec<Term>> {
        if let Some(v) = self.memo.get(&(s, m)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if s == 1 {
            out.extend((1..=m).map(Term::Index));
            if self.spec.allow_metavars {
                let idx: Vec<u32> = (1..=m).collect();
                for d in small_subsets(&idx, self.spec.max_delta) {
                    out.push(Term::Meta(META_NAME.into(), d.into_iter().collect()));
                }
            }
        } else {
            for b in self.of_size(s - 1, m + 1).iter() {
                out.push(Term::lam(b.clone()));
            }
            for i in 1..s - 1 {
                let (ls, rs) = (self.of_size(i, m), self.of_size(s - 1 - i, m));
                for l in ls.iter() {
                    for r in rs.iter() {
                        out.push(Term::app(l.clone(), r.clone()));
                    }
                }
            }
            if self.spec.allow_closures {
                for i in 1..s - 1 {
                    let (bs, ss) = (self.of_size(i, m + 1), self.of_size(s - 1 - i, m));
                    for b in bs.iter() {
                        for c in ss.iter() {
                            out.push(Term::clos(b.clone(), c.clone()));
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert((s, m), out.clone());
        out
    }
}

pub fn enumerate_indexed(spec: &EnumSpec) -> Vec<Term> {
    let mut g = IndexedGen { spec, memo: HashMap::new() };
    (1..=spec.max_size).flat_map(|s| g.of_size(s, spec.fv_bound).as_ref().clone()).collect()
}

/// Free names and binder names for named generation: the first
/// `fv_bound` enumeration names are free, binders range over one more.
fn named_pools(spec: &EnumSpec) -> (Vec<String>, Vec<String>) {
    let e = VarEnumeration::default();
    let free = (1..=spec.fv_bound).map(|i| e.name(i)).collect();
    let binders = (1..=spec.fv_bound + 1).map(|i| e.name(i)).collect();
    (free, binders)
}

struct NamedGen<'a> {
    spec: &'a EnumSpec,
    binders: Vec<String>,
    memo: HashMap<(usize, Vec<String>), Rc<Vec<NamedTerm>>>,
}

impl NamedGen<'_> {
    fn with(scope: &[String], x: &str) -> Vec<String> {
        let mut v = scope.to_vec();
        if let Err(at) = v.binary_search_by(|y| y.as_str().cmp(x)) {
            v.insert(at, x.to_string());
        }
        v
    }

    /// Terms of exactly size `s` whose free names lie in the sorted `scope`.
    fn of_size(&mut self, s: usize, scope: &[String]) -> Rc<Vec<NamedTerm>> {
        let key = (s, scope.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = Vec::new();
        if s == 1 {
            out.extend(scope.iter().map(NamedTerm::var));
            if self.spec.allow_metavars {
                for d in small_subsets(scope, self.spec.max_delta) {
                    out.push(NamedTerm::Meta(META_NAME.into(), d.into_iter().collect::<VarSet>()));
                }
            }
        } else {
            for x in self.binders.clone() {
                for b in self.of_size(s - 1, &Self::with(scope, &x)).iter() {
                    out.push(NamedTerm::lam(x.clone(), b.clone()));
                }
            }
            for i in 1..s - 1 {
                let (ls, rs) = (self.of_size(i, scope), self.of_size(s - 1 - i, scope));
                for l in ls.iter() {
                    for r in rs.iter() {
                        out.push(NamedTerm::app(l.clone(), r.clone()));
                    }
                }
            }
            if self.spec.allow_closures {
                for x in self.binders.clone() {
                    for i in 1..s - 1 {
                        let (bs, us) = (self.of_size(i, &Self::with(scope, &x)), self.of_size(s - 1 - i, scope));
                        for b in bs.iter() {
                            for u in us.iter() {
                                out.push(NamedTerm::exsub(b.clone(), x.clone(), u.clone()));
                            }
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }
}

pub fn enumerate_named(spec: &EnumSpec) -> Vec<NamedTerm> {
    let (mut free, binders) = named_pools(spec);
    free.sort();
    let mut g = NamedGen { spec, binders, memo: HashMap::new() };
    (1..=spec.max_size).flat_map(|s| g.of_size(s, &free).as_ref().clone()).collect()
}

/// Number of indexed terms of size exactly `s` with free indexes in
/// `1..=m`, without metavariables, from the size recurrence alone.
pub fn count_indexed(s: usize, m: u32, closures: bool) -> u128 {
    fn go(s: usize, m: u32, closures: bool, memo: &mut HashMap<(usize, u32), u128>) -> u128 {
        if s == 0 {
            return 0;
        }
        if s == 1 {
            return m as u128;
        }
        if let Some(&c) = memo.get(&(s, m)) {
            return c;
        }
        let mut c = go(s - 1, m + 1, closures, memo);
        for i in 1..s - 1 {
            c += go(i, m, closures, memo) * go(s - 1 - i, m, closures, memo);
            if closures {
                c += go(i, m + 1, closures, memo) * go(s - 1 - i, m, closures, memo);
            }
        }
        memo.insert((s, m), c);
        c
    }
    go(s, m, closures, &mut HashMap::new())
}

/// Deterministic sample for `seed` and `spec`, of size at most `max_size`.
pub fn random_term(seed: u64, spec: &EnumSpec) -> AnyTerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.random_range(1..=spec.max_size.max(1));
    random_term_sized(&mut rng, spec, size)
}

/// A sample of exactly `size` nodes where the spec permits one; with no
/// free indexes and no metavariables a size-1 term is impossible, and the
/// result is one node larger.
pub fn random_term_sized<R: Rng>(rng: &mut R, spec: &EnumSpec, size: usize) -> AnyTerm {
    match spec.world {
        World::Indexed => AnyTerm::Indexed(random_indexed(rng, spec, size.max(1), spec.fv_bound)),
        World::Named => {
            let (free, binders) = named_pools(spec);
            AnyTerm::Named(random_named(rng, spec, size.max(1), &free, &binders))
        }
    }
}

fn random_delta<R: Rng>(rng: &mut R, m: u32, max_delta: usize) -> NatSet {
    let k = rng.random_range(0..=max_delta.min(m as usize));
    let mut d = NatSet::new();
    while d.len() < k {
        d.insert(rng.random_range(1..=m));
    }
    d
}

fn random_indexed<R: Rng>(rng: &mut R, spec: &EnumSpec, s: usize, m: u32) -> Term {
    let leaf_ok = m >= 1 || spec.allow_metavars;
    if s == 1 && leaf_ok {
        if spec.allow_metavars && (m == 0 || rng.random_bool(0.25)) {
            return Term::Meta(META_NAME.into(), random_delta(rng, m, spec.max_delta));
        }
        return Term::Index(rng.random_range(1..=m));
    }
    if s <= 2 {
        return Term::lam(random_indexed(rng, spec, 1, m + 1));
    }
    // binary nodes need both parts realisable at this scope
    let split_ok = |i: usize| (i > 1 || leaf_ok) && (s - 1 - i > 1 || leaf_ok);
    let choice = rng.random_range(0..if spec.allow_closures { 3 } else { 2 });
    let i = rng.random_range(1..s - 1);
    match choice {
        1 if split_ok(i) => Term::app(random_indexed(rng, spec, i, m), random_indexed(rng, spec, s - 1 - i, m)),
        2 if s - 1 - i > 1 || leaf_ok => {
            Term::clos(random_indexed(rng, spec, i, m + 1), random_indexed(rng, spec, s - 1 - i, m))
        }
        _ => Term::lam(random_indexed(rng, spec, s - 1, m + 1)),
    }
}

fn random_named<R: Rng>(rng: &mut R, spec: &EnumSpec, s: usize, scope: &[String], binders: &[String]) -> NamedTerm {
    let leaf_ok = !scope.is_empty() || spec.allow_metavars;
    let pick_binder = |rng: &mut R| binders[rng.random_range(0..binders.len())].clone();
    let extend = |x: &str| {
        let mut v = scope.to_vec();
        if !v.iter().any(|y| y == x) {
            v.push(x.to_string());
        }
        v
    };
    if s == 1 && leaf_ok {
        if spec.allow_metavars && (scope.is_empty() || rng.random_bool(0.25)) {
            let k = rng.random_range(0..=spec.max_delta.min(scope.len()));
            let mut d = VarSet::new();
            while d.len() < k {
                d.insert(scope[rng.random_range(0..scope.len())].clone());
            }
            return NamedTerm::Meta(META_NAME.into(), d);
        }
        return NamedTerm::var(scope[rng.random_range(0..scope.len())].clone());
    }
    if s <= 2 {
        let x = pick_binder(rng);
        return NamedTerm::lam(x.clone(), random_named(rng, spec, 1, &extend(&x), binders));
    }
    let choice = rng.random_range(0..if spec.allow_closures { 3 } else { 2 });
    let i = rng.random_range(1..s - 1);
    let split_ok = (i > 1 || leaf_ok) && (s - 1 - i > 1 || leaf_ok);
    match choice {
        1 if split_ok => NamedTerm::app(
            random_named(rng, spec, i, scope, binders),
            random_named(rng, spec, s - 1 - i, scope, binders),
        ),
        2 if s - 1 - i > 1 || leaf_ok => {
            let x = pick_binder(rng);
            NamedTerm::exsub(
                random_named(rng, spec, i, &extend(&x), binders),
                x,
                random_named(rng, spec, s - 1 - i, scope, binders),
            )
        }
        _ => {
            let x = pick_binder(rng);
            NamedTerm::lam(x.clone(), random_named(rng, spec, s - 1, &extend(&x), binders))
        }
    }
}
