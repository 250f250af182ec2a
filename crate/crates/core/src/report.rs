//! Verification reports: labelled exact relations between entropy values.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linrv::EntropyValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: EntropyValue, rhs: EntropyValue) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// One checked relation `lhs (=|>=) rhs`, both sides kept for diagnosis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub lhs: EntropyValue,
    pub rhs: EntropyValue,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, lhs: EntropyValue, relation: Relation, rhs: EntropyValue) -> Self {
        Self {
            label: label.into(),
            lhs,
            rhs,
            relation,
            pass: relation.holds(lhs, rhs),
        }
    }

    pub fn eq(label: impl Into<String>, lhs: EntropyValue, rhs: EntropyValue) -> Self {
        Self::new(label, lhs, Relation::Eq, rhs)
    }

    pub fn ge(label: impl Into<String>, lhs: EntropyValue, rhs: EntropyValue) -> Self {
        Self::new(label, lhs, Relation::Ge, rhs)
    }

    /// Equality holds, not merely the inequality.
    pub fn is_tight(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} {} {}",
            if self.pass { "pass" } else { "FAIL" },
            self.label,
            self.lhs,
            self.relation,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl Default for VerifyReport {
    fn default() -> Self {
        Self::new()
    }
}

impl VerifyReport {
    pub fn new() -> Self {
        Self {
            checks: Vec::new(),
            overall: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.overall &= check.pass;
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerifyReport) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl FromIterator<Check> for VerifyReport {
    fn from_iter<I: IntoIterator<Item = Check>>(iter: I) -> Self {
        let mut r = Self::new();
        for c in iter {
            r.push(c);
        }
        r
    }
}
