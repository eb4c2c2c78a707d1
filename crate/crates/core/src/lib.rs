//! Explicit-substitution lambda calculi with de Bruijn indices and with
//! names: terms, meta-operators, rewriting (modulo D and C), the
//! translations between the two worlds, and exhaustive property oracles.

pub mod alpha;
pub mod engine;
pub mod meta_ops;
pub mod natset;
pub mod syntax;
pub mod term;
pub mod testgen;
pub mod translate;

pub use engine::{CalculusId, RuleId, Strategy};
pub use natset::NatSet;
pub use syntax::{parse_indexed, parse_named, ParseError, World};
pub use term::{NamedTerm, Position, Term, VarList, VarSet};
