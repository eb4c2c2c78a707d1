use std::collections::{BTreeSet, HashMap, HashSet};

use crate::engine::{canon, step_modulo, CalculusId, EngineError, Rewritable};

/// Memoised one-step successors of class representatives.
pub struct Successors<T> {
    calc: CalculusId,
    cap: usize,
    cache: HashMap<T, BTreeSet<T>>,
}

impl<T: Rewritable> Successors<T> {
    pub fn new(calc: CalculusId, cap: usize) -> Self {
        Successors { calc, cap, cache: HashMap::new() }
    }

    /// Successors of the representative `r`.
    pub fn of(&mut self, r: &T) -> Result<&BTreeSet<T>, EngineError> {
        if !self.cache.contains_key(r) {
            let next = step_modulo(self.calc, r, self.cap)?;
            self.cache.insert(r.clone(), next);
        }
        Ok(&self.cache[r])
    }

    pub fn canon(&self, t: &T) -> Result<T, EngineError> {
        canon(self.calc, t, self.cap)
    }
}

/// True iff the reduction graphs of `t1` and `t2`, explored breadth-first
/// to `depth` steps each over class representatives, share a node.
pub fn joinable<T: Rewritable>(calc: CalculusId, t1: &T, t2: &T, depth: usize, cap: usize) -> Result<bool, EngineError> {
    joinable_with(&mut Successors::new(calc, cap), t1, t2, depth)
}

/// [`joinable`] sharing a successor cache across queries.
pub fn joinable_with<T: Rewritable>(succ: &mut Successors<T>, t1: &T, t2: &T, depth: usize) -> Result<bool, EngineError> {
    let (r1, r2) = (succ.canon(t1)?, succ.canon(t2)?);
    if r1 == r2 {
        return Ok(true);
    }
    let mut seen = [HashSet::from([r1.clone()]), HashSet::from([r2.clone()])];
    let mut frontier = [vec![r1], vec![r2]];
    // alternate sides, one level at a time
    for _ in 0..depth {
        for side in 0..2 {
            let mut next = Vec::new();
            for r in std::mem::take(&mut frontier[side]) {
                for s in succ.of(&r)?.clone() {
                    if seen[1 - side].contains(&s) {
                        return Ok(true);
                    }
                    if seen[side].insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
            frontier[side] = next;
        }
        if frontier.iter().all(Vec::is_empty) {
            break;
        }
    }
    Ok(false)
}
