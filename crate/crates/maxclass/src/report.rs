//! Verification reports.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Informational only; outside the asserted range.
    Report,
    /// Nothing to check in the given instance.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status, detail: detail.into() }
    }

    /// Pass or fail according to `ok`.
    pub fn assert(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// True if no check failed.
pub fn all_passed(checks: &[Check]) -> bool {
    !checks.iter().any(Check::failed)
}
