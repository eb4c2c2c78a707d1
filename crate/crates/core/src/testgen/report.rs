use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Counterexamples kept per report; the failure count is always exact.
pub const MAX_COUNTEREXAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportStatus {
    Pass,
    Fail,
    BoundExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    /// Number of checked instances.
    pub universe: u64,
    pub failures: u64,
    /// Instances abandoned on a step or class bound.
    pub bound_exceeded: u64,
    /// First failing inputs in enumeration order, as `name=term` pairs.
    pub counterexamples: Vec<String>,
    pub elapsed_ms: u64,
    pub status: ReportStatus,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.status == ReportStatus::Pass
    }
}

/// Accumulates outcomes; merging is associative so shards can be folded in
/// any grouping while keeping enumeration order.
#[derive(Debug, Clone, Default)]
pub struct Tally {
    pub cases: u64,
    pub failures: u64,
    pub bounded: u64,
    pub examples: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_COUNTEREXAMPLES {
                self.examples.push(describe());
            }
        }
    }

    /// Records an instance that could not be decided within a bound.
    pub fn bound(&mut self, describe: impl FnOnce() -> String) {
        self.cases += 1;
        self.bounded += 1;
        if self.examples.len() < MAX_COUNTEREXAMPLES {
            self.examples.push(format!("bound exceeded: {}", describe()));
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        self.bounded += other.bounded;
        let room = MAX_COUNTEREXAMPLES.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
        self
    }

    pub fn into_report(self, property: &str, elapsed_ms: u64) -> PropertyReport {
        let status = if self.failures > 0 {
            ReportStatus::Fail
        } else if self.bounded > 0 {
            ReportStatus::BoundExceeded
        } else {
            ReportStatus::Pass
        };
        PropertyReport {
            property: property.to_string(),
            universe: self.cases,
            failures: self.failures,
            bound_exceeded: self.bounded,
            counterexamples: self.examples,
            elapsed_ms,
            status,
        }
    }
}

/// Fixed-width table, one row per report.
pub fn summary_table(reports: &[PropertyReport]) -> String {
    let mut out = String::new();
    let w = reports.iter().map(|r| r.property.len()).max().unwrap_or(8).max(8);
    let _ = writeln!(out, "{:<w$}  {:>10}  {:>8}  {:>7}  {:>9}  status", "property", "universe", "failures", "bounded", "ms");
    for r in reports {
        let status = serde_json::to_value(r.status).expect("unit variant");
        let _ = writeln!(
            out,
            "{:<w$}  {:>10}  {:>8}  {:>7}  {:>9}  {}",
            r.property,
            r.universe,
            r.failures,
            r.bound_exceeded,
            r.elapsed_ms,
            status.as_str().expect("string")
        );
        for c in &r.counterexamples {
            let _ = writeln!(out, "    {c}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_associative_and_ordered() {
        let mk = |ok: bool, s: &str| {
            let mut t = Tally::default();
            t.check(ok, || s.to_string());
            t
        };
        let (a, b, c) = (mk(false, "a"), mk(true, "b"), mk(false, "c"));
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.merge(b.merge(c));
        assert_eq!(left.examples, right.examples);
        assert_eq!(left.examples, ["a", "c"]);
        assert_eq!((left.cases, left.failures), (3, 2));
    }

    #[test]
    fn status_and_json() {
        let mut t = Tally::default();
        t.check(true, String::new);
        assert!(t.clone().into_report("p", 0).passed());
        t.bound(|| "x".into());
        let r = t.into_report("p", 3);
        assert_eq!(r.status, ReportStatus::BoundExceeded);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "bound-exceeded");
        assert!(summary_table(&[r]).contains("bound-exceeded"));
    }
}
