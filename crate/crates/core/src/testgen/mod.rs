//! Exhaustive enumeration, seeded sampling, reduction-graph oracles and
//! the packaged property suites.

mod enumerate;
mod joinable;
mod report;
mod suites;

pub use enumerate::{
    count_indexed, enumerate, enumerate_indexed, enumerate_named, random_term, random_term_sized, AnyTerm, EnumSpec,
    META_NAME,
};
pub use joinable::{joinable, joinable_with, Successors};
pub use report::{summary_table, PropertyReport, ReportStatus, Tally, MAX_COUNTEREXAMPLES};
pub use suites::{run_suite, RandomConfig, SuiteConfig, SuiteId, DEFAULT_SEED};
