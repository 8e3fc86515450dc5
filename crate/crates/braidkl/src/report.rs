//! Verification reports: one line per checked identity, with both sides
//! rendered exactly, serializable to JSON for golden-file diffing.

use serde::Serialize;
use std::fmt::Display;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerifyReport {
            suite: suite.into(),
            checks: Vec::new(),
            pass: true,
        }
    }

    pub fn check_eq<L: Display, R: Display>(
        &mut self,
        name: impl Into<String>,
        lhs: L,
        rhs: R,
    ) -> bool {
        let lhs = lhs.to_string();
        let rhs = rhs.to_string();
        let pass = lhs == rhs;
        self.pass &= pass;
        self.checks.push(Check {
            name: name.into(),
            lhs,
            rhs,
            pass,
        });
        pass
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> bool {
        self.pass &= ok;
        self.checks.push(Check {
            name: name.into(),
            lhs: detail.into(),
            rhs: if ok { "ok" } else { "violated" }.into(),
            pass: ok,
        });
        ok
    }

    /// Fold another report's checks into this one, prefixing their names.
    pub fn absorb(&mut self, other: VerifyReport) {
        for mut c in other.checks {
            c.name = format!("{}: {}", other.suite, c.name);
            self.pass &= c.pass;
            self.checks.push(c);
        }
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}
