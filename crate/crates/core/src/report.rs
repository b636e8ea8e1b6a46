//! Verification reports: deterministic, serializable records of the
//! identity checks performed by the other modules.

use serde::{Deserialize, Serialize};
use std::fmt;

/// One checked relation instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    /// Which relation family was checked, e.g. `"gln-bracket"`.
    pub relation: String,
    /// The index tuple the relation was instantiated at, in display form.
    pub indices: String,
    /// Canonical text form of the residual (symbolic checks) or its
    /// magnitude (numeric checks). `"0"` means exact zero.
    pub residual: String,
    pub pass: bool,
}

/// Result of running one family of checks.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        VerificationReport { checks: Vec::new() }
    }

    pub fn record(&mut self, relation: &str, indices: String, residual: String, pass: bool) {
        self.checks.push(CheckRecord {
            relation: relation.to_string(),
            indices,
            residual,
            pass,
        });
    }

    /// Record a symbolic residual that must vanish.
    pub fn record_zero(&mut self, relation: &str, indices: String, residual_is_zero: bool, residual_text: String) {
        self.record(
            relation,
            indices,
            if residual_is_zero { "0".into() } else { residual_text },
            residual_is_zero,
        );
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {} {} residual={}",
                if c.pass { "PASS" } else { "FAIL" },
                c.relation,
                c.indices,
                c.residual
            )?;
        }
        Ok(())
    }
}
