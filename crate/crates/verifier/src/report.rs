//! Machine-readable reports assembled from named residual checks.

use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Outcome of a single named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The check was not run because a declared hypothesis does not hold
    /// on the given data; skipping is not a failure.
    Skip,
}

/// Result of running one check: either it passed, or it failed with the
/// fully normalized residual, or it was skipped with a reason.
pub enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

impl Outcome {
    /// `Pass` when the flag is set, `Fail` with the rendered residual
    /// otherwise.
    pub fn from_residual(zero: bool, render: impl FnOnce() -> String) -> Self {
        if zero {
            Outcome::Pass
        } else {
            Outcome::Fail(render())
        }
    }
}

/// One line of a [`Report`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    /// Residual normal form when failing, or the skip reason.
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

/// Deterministic, ordered collection of check results.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<CheckEntry>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Run a check, timing it, and append the outcome.
    pub fn record(&mut self, name: &str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let elapsed_ms = start.elapsed().as_millis() as u64;
        let (status, detail) = match outcome {
            Outcome::Pass => (Status::Pass, None),
            Outcome::Fail(r) => (Status::Fail, Some(r)),
            Outcome::Skip(r) => (Status::Skip, Some(r)),
        };
        self.entries.push(CheckEntry {
            name: name.to_string(),
            status,
            detail,
            elapsed_ms,
        });
    }

    /// Append all entries of another report.
    pub fn merge(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    /// True when no entry failed (skipped entries do not count).
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.status == Status::Fail)
            .map(|e| e.name.as_str())
            .collect()
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}
