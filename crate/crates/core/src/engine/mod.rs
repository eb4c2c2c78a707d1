//! Rewriting for the eight calculi: rule tables, redex enumeration under
//! arbitrary contexts, rewriting modulo the D and C equations, and
//! normalisation strategies with replayable traces.

mod modulo;
mod normalize;
mod rules;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{ParseError, World};
use crate::term::{NamedTerm, Position, Term, Tree};

pub use modulo::{canon, class_members, d_class, is_normal, step_modulo, step_redexes, DEFAULT_CLASS_CAP};
pub use normalize::{normalize, replay, NormalizeError, ReplayError, Status, Step, Strategy, Trace, TraceJson};
pub use rules::{apply_rule_at_root, eqc_apply, eqd_apply};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CalculusId {
    DB,
    R,
    Re,
    Regc,
    Rex,
    X,
    Xgc,
    Ex,
    /// `re` without Beta.
    ReSub,
    /// `re_gc` without Beta.
    RegcSub,
    /// `rex` without Beta.
    RexSub,
}

/// Which equation a calculus rewrites modulo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    D,
    C,
}

impl CalculusId {
    pub const ALL: [CalculusId; 11] = [
        CalculusId::DB,
        CalculusId::R,
        CalculusId::Re,
        CalculusId::Regc,
        CalculusId::Rex,
        CalculusId::X,
        CalculusId::Xgc,
        CalculusId::Ex,
        CalculusId::ReSub,
        CalculusId::RegcSub,
        CalculusId::RexSub,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CalculusId::DB => "dB",
            CalculusId::R => "r",
            CalculusId::Re => "re",
            CalculusId::Regc => "regc",
            CalculusId::Rex => "rex",
            CalculusId::X => "x",
            CalculusId::Xgc => "xgc",
            CalculusId::Ex => "ex",
            CalculusId::ReSub => "re_sub",
            CalculusId::RegcSub => "regc_sub",
            CalculusId::RexSub => "rex_sub",
        }
    }

    pub fn world(self) -> World {
        match self {
            CalculusId::X | CalculusId::Xgc | CalculusId::Ex => World::Named,
            _ => World::Indexed,
        }
    }

    pub fn modulo(self) -> Option<Equation> {
        match self {
            CalculusId::Rex | CalculusId::RexSub => Some(Equation::D),
            CalculusId::Ex => Some(Equation::C),
            _ => None,
        }
    }

    /// The rule table, in the order rules are tried at a single position.
    pub fn rules(self) -> &'static [RuleId] {
        use RuleId::*;
        match self {
            CalculusId::DB | CalculusId::R => &[Beta],
            CalculusId::Re => &[Beta, App, Lamb, Var, VarR],
            CalculusId::Regc => &[Beta, App, Lamb, Var, VarR, GC],
            CalculusId::Rex => &[Beta, App, Lamb, Var, GC, Comp],
            CalculusId::ReSub => &[App, Lamb, Var, VarR],
            CalculusId::RegcSub => &[App, Lamb, Var, VarR, GC],
            CalculusId::RexSub => &[App, Lamb, Var, GC, Comp],
            CalculusId::X => &[NBeta, NApp, NLamb, NVar, NVarGC],
            CalculusId::Xgc => &[NBeta, NApp, NLamb, NVar, NVarGC, NGc],
            CalculusId::Ex => &[NBeta, NApp, NLamb, NVar, NGc, NComp],
        }
    }

    /// True for dB and r, whose Beta contracts with a meta-substitution.
    pub fn uses_meta_substitution(self) -> bool {
        matches!(self, CalculusId::DB | CalculusId::R)
    }
}

impl fmt::Display for CalculusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CalculusId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CalculusId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s) || c.name().replace('_', "-") == s)
            .ok_or_else(|| format!("unknown calculus '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    Beta,
    App,
    Lamb,
    Var,
    VarR,
    GC,
    Comp,
    #[serde(rename = "EqD-LR")]
    EqDLR,
    #[serde(rename = "EqD-RL")]
    EqDRL,
    NBeta,
    NApp,
    NLamb,
    NVar,
    NVarGC,
    NGc,
    NComp,
    EqC,
}

impl RuleId {
    pub fn is_equation(self) -> bool {
        matches!(self, RuleId::EqDLR | RuleId::EqDRL | RuleId::EqC)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("unit variant"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("equivalence class exceeded the cap of {cap} members")]
    ClassCapExceeded { cap: usize },
}

/// A term world the engine can rewrite.
pub trait Rewritable: Tree + Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display + Send + Sync {
    const WORLD: World;

    /// Contractum of `rule` at the root, if pattern and side condition match.
    fn apply_rule_at_root(&self, rule: RuleId) -> Option<Self>;

    /// Contractum of `rule` at the root under `calc`. Differs from
    /// [`Rewritable::apply_rule_at_root`] only for Beta in dB and r.
    fn contract(&self, _calc: CalculusId, rule: RuleId) -> Option<Self> {
        self.apply_rule_at_root(rule)
    }

    /// One application of the world's equation (D or C) at `p`.
    fn equation_at(&self, p: &Position) -> Option<Self>;

    /// Representative of the term's syntactic identity class: the term
    /// itself for indexed terms, the α-canonical form for named ones.
    fn key(&self) -> Self;

    fn parse(s: &str) -> Result<Self, ParseError>;
}

impl Rewritable for Term {
    const WORLD: World = World::Indexed;

    fn apply_rule_at_root(&self, rule: RuleId) -> Option<Self> {
        rules::apply_indexed(rule, self)
    }

    fn contract(&self, calc: CalculusId, rule: RuleId) -> Option<Self> {
        rules::contract_indexed(calc, rule, self)
    }

    fn equation_at(&self, p: &Position) -> Option<Self> {
        eqd_apply(self, p)
    }

    fn key(&self) -> Self {
        self.clone()
    }

    fn parse(s: &str) -> Result<Self, ParseError> {
        crate::syntax::parse_indexed(s)
    }
}

impl Rewritable for NamedTerm {
    const WORLD: World = World::Named;

    fn apply_rule_at_root(&self, rule: RuleId) -> Option<Self> {
        rules::apply_named(rule, self)
    }

    fn equation_at(&self, p: &Position) -> Option<Self> {
        eqc_apply(self, p)
    }

    fn key(&self) -> Self {
        crate::alpha::alpha_canon(self)
    }

    fn parse(s: &str) -> Result<Self, ParseError> {
        crate::syntax::parse_named(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calculus_names_round_trip() {
        for c in CalculusId::ALL {
            assert_eq!(c.name().parse::<CalculusId>().unwrap(), c);
        }
        assert_eq!("rex-sub".parse::<CalculusId>().unwrap(), CalculusId::RexSub);
        assert_eq!("db".parse::<CalculusId>().unwrap(), CalculusId::DB);
        assert!("lambda".parse::<CalculusId>().is_err());
    }

    #[test]
    fn rule_table_shape() {
        assert!(!CalculusId::Rex.rules().contains(&RuleId::VarR));
        assert!(CalculusId::Regc.rules().contains(&RuleId::GC));
        assert!(!CalculusId::RexSub.rules().contains(&RuleId::Beta));
        for c in CalculusId::ALL {
            assert!(c.rules().iter().all(|r| !r.is_equation()));
        }
        assert_eq!(RuleId::EqDLR.to_string(), "EqD-LR");
        assert_eq!(RuleId::NVarGC.to_string(), "NVarGC");
    }
}
