// SPDX-License-Identifier: Apache-2.0

//! Outcome of evaluating a family of inequalities on concrete instances.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Short name of the inequality that failed.
    pub check: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    /// Number of individual inequalities evaluated.
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts one evaluation; `detail` is only rendered on failure.
    pub fn record(&mut self, check: &'static str, holds: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !holds {
            self.violations.push(Violation {
                check,
                detail: detail(),
            });
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} checks, {} violations",
            self.checks,
            self.violations.len()
        )?;
        for v in &self.violations {
            write!(f, "\n  {}: {}", v.check, v.detail)?;
        }
        Ok(())
    }
}
