use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::ParseError;
use crate::term::{Position, Tree};

use super::modulo::class_members;
use super::{CalculusId, EngineError, Rewritable, RuleId};

/// Node budget for [`Strategy::FullBfs`].
const BFS_NODE_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    LeftmostOutermost,
    RightmostInnermost,
    /// Shortest path to a normal form by breadth-first search.
    FullBfs,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::LeftmostOutermost, Strategy::RightmostInnermost, Strategy::FullBfs];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::LeftmostOutermost => "leftmost-outermost",
            Strategy::RightmostInnermost => "rightmost-innermost",
            Strategy::FullBfs => "full-bfs",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lo" | "leftmost-outermost" => Ok(Strategy::LeftmostOutermost),
            "ri" | "rightmost-innermost" => Ok(Strategy::RightmostInnermost),
            "bfs" | "full-bfs" => Ok(Strategy::FullBfs),
            _ => Err(format!("unknown strategy '{s}'")),
        }
    }
}

/// One rewrite step. For calculi rewriting modulo an equation the rule may
/// fire on a class member reached from `before` by equation moves at the
/// listed positions, applied in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step<T> {
    pub rule: RuleId,
    pub position: Position,
    pub equations: Vec<Position>,
    pub before: T,
    pub after: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Normal,
    BoundExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace<T> {
    pub calculus: CalculusId,
    pub initial: T,
    pub steps: Vec<Step<T>>,
    pub result: T,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError<T> {
    #[error("no normal form within the step bound")]
    BoundExceeded(Box<Trace<T>>),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Positions in post-order, children visited right to left.
fn rightmost_innermost_positions<T: Tree>(t: &T) -> Vec<Position> {
    fn go<T: Tree>(t: &T, here: &mut Position, out: &mut Vec<Position>) {
        for (c, child) in t.children().into_iter().rev() {
            here.0.push(c);
            go(child, here, out);
            here.0.pop();
        }
        out.push(here.clone());
    }
    let mut out = Vec::new();
    go(t, &mut Position::root(), &mut out);
    out
}

/// First (position, rule, contractum) in the given position order.
fn first_redex<T: Rewritable>(calc: CalculusId, t: &T, order: Vec<Position>) -> Option<(Position, RuleId, T)> {
    for p in order {
        let sub = t.subterm(&p).expect("valid position");
        for &rule in calc.rules() {
            if let Some(c) = sub.contract(calc, rule) {
                return Some((p, rule, c));
            }
        }
    }
    None
}

/// Class members of `t` with the equation path reaching each; just `t`
/// when the calculus has no equation.
fn members<T: Rewritable>(calc: CalculusId, t: &T, cap: usize) -> Result<Vec<(T, Vec<Position>)>, EngineError> {
    if calc.modulo().is_some() {
        class_members(t, cap)
    } else {
        Ok(vec![(t.clone(), Vec::new())])
    }
}

fn select_step<T: Rewritable>(calc: CalculusId, strategy: Strategy, t: &T, cap: usize) -> Result<Option<Step<T>>, EngineError> {
    for (m, path) in members(calc, t, cap)? {
        let order = match strategy {
            Strategy::RightmostInnermost => rightmost_innermost_positions(&m),
            _ => m.positions(),
        };
        if let Some((p, rule, c)) = first_redex(calc, &m, order) {
            let after = m.replace_at(&p, c).expect("valid position");
            return Ok(Some(Step { rule, position: p, equations: path, before: t.clone(), after }));
        }
    }
    Ok(None)
}

/// Every step out of `t`, including those through equation moves.
fn all_steps<T: Rewritable>(calc: CalculusId, t: &T, cap: usize) -> Result<Vec<Step<T>>, EngineError> {
    let mut out = Vec::new();
    for (m, path) in members(calc, t, cap)? {
        for s in super::step_redexes(calc, &m) {
            out.push(Step { equations: path.clone(), before: t.clone(), ..s });
        }
    }
    Ok(out)
}

/// Reduce `t` under `calc` until no redex remains (in any class member,
/// for calculi modulo an equation) or `max_steps` steps have been taken.
pub fn normalize<T: Rewritable>(
    calc: CalculusId,
    strategy: Strategy,
    t: &T,
    max_steps: usize,
    cap: usize,
) -> Result<Trace<T>, NormalizeError<T>> {
    if strategy == Strategy::FullBfs {
        return normalize_bfs(calc, t, max_steps, cap);
    }
    let mut steps = Vec::new();
    let mut cur = t.clone();
    loop {
        match select_step(calc, strategy, &cur, cap)? {
            None => {
                return Ok(Trace { calculus: calc, initial: t.clone(), steps, result: cur, status: Status::Normal });
            }
            Some(_) if steps.len() >= max_steps => {
                let trace = Trace { calculus: calc, initial: t.clone(), steps, result: cur, status: Status::BoundExceeded };
                return Err(NormalizeError::BoundExceeded(Box::new(trace)));
            }
            Some(step) => {
                cur = step.after.clone();
                steps.push(step);
            }
        }
    }
}

fn normalize_bfs<T: Rewritable>(calc: CalculusId, t: &T, max_steps: usize, cap: usize) -> Result<Trace<T>, NormalizeError<T>> {
    // node key -> (parent key, step into node)
    let mut parent: HashMap<T, Option<(T, Step<T>)>> = HashMap::new();
    let start = super::canon(calc, t, cap)?;
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(t.clone(), start, 0usize)]);
    while let Some((cur, key, depth)) = queue.pop_front() {
        let succ = all_steps(calc, &cur, cap)?;
        if succ.is_empty() {
            let mut steps = Vec::new();
            let mut k = key;
            while let Some(Some((pk, s))) = parent.get(&k) {
                steps.push(s.clone());
                k = pk.clone();
            }
            steps.reverse();
            return Ok(Trace { calculus: calc, initial: t.clone(), steps, result: cur, status: Status::Normal });
        }
        if depth >= max_steps || parent.len() > BFS_NODE_CAP {
            continue;
        }
        for s in succ {
            let k = super::canon(calc, &s.after, cap)?;
            if !parent.contains_key(&k) {
                let after = s.after.clone();
                parent.insert(k.clone(), Some((key.clone(), s)));
                queue.push_back((after, k, depth + 1));
            }
        }
    }
    let trace = Trace { calculus: calc, initial: t.clone(), steps: Vec::new(), result: t.clone(), status: Status::BoundExceeded };
    Err(NormalizeError::BoundExceeded(Box::new(trace)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: equation move at {position} does not apply")]
    Equation { step: usize, position: String },
    #[error("step {step}: rule {rule} does not apply at {position}")]
    Rule { step: usize, rule: RuleId, position: String },
    #[error("step {step}: expected {expected}, got {got}")]
    Mismatch { step: usize, expected: String, got: String },
    #[error("recorded result {expected} differs from replayed {got}")]
    Result { expected: String, got: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown calculus '{0}'")]
    Calculus(String),
}

/// Re-run every recorded step from the initial term and compare printed
/// forms byte for byte.
pub fn replay<T: Rewritable>(trace: &Trace<T>) -> Result<(), ReplayError> {
    let calc = trace.calculus;
    let mut cur = trace.initial.clone();
    for (k, step) in trace.steps.iter().enumerate() {
        if step.before.to_string() != cur.to_string() {
            return Err(ReplayError::Mismatch { step: k, expected: step.before.to_string(), got: cur.to_string() });
        }
        for p in &step.equations {
            cur = cur
                .equation_at(p)
                .ok_or_else(|| ReplayError::Equation { step: k, position: p.to_string() })?;
        }
        let rule_err = || ReplayError::Rule { step: k, rule: step.rule, position: step.position.to_string() };
        let contractum = cur.subterm(&step.position).and_then(|s| s.contract(calc, step.rule)).ok_or_else(rule_err)?;
        cur = cur.replace_at(&step.position, contractum).ok_or_else(rule_err)?;
        let (expected, got) = (step.after.to_string(), cur.to_string());
        if expected != got {
            return Err(ReplayError::Mismatch { step: k, expected, got });
        }
    }
    let (expected, got) = (trace.result.to_string(), cur.to_string());
    if expected != got {
        return Err(ReplayError::Result { expected, got });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub rule: RuleId,
    pub position: Position,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<Position>,
    pub after: String,
}

/// Serialized trace; terms are in printed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub calculus: String,
    pub initial: String,
    pub steps: Vec<StepJson>,
    pub result: String,
    pub status: Status,
}

impl<T: Rewritable> From<&Trace<T>> for TraceJson {
    fn from(t: &Trace<T>) -> Self {
        TraceJson {
            calculus: t.calculus.name().to_string(),
            initial: t.initial.to_string(),
            steps: t
                .steps
                .iter()
                .map(|s| StepJson {
                    rule: s.rule,
                    position: s.position.clone(),
                    equations: s.equations.clone(),
                    after: s.after.to_string(),
                })
                .collect(),
            result: t.result.to_string(),
            status: t.status,
        }
    }
}

impl TraceJson {
    /// Parse back into a trace over `T`.
    pub fn to_trace<T: Rewritable>(&self) -> Result<Trace<T>, ReplayError> {
        let calculus: CalculusId = self.calculus.parse().map_err(|_| ReplayError::Calculus(self.calculus.clone()))?;
        let initial = T::parse(&self.initial)?;
        let mut before = initial.clone();
        let mut steps = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let after = T::parse(&s.after)?;
            steps.push(Step {
                rule: s.rule,
                position: s.position.clone(),
                equations: s.equations.clone(),
                before: before.clone(),
                after: after.clone(),
            });
            before = after;
        }
        Ok(Trace { calculus, initial, steps, result: T::parse(&self.result)?, status: self.status })
    }
}
