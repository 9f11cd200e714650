//! Machine-readable results. Every field is always serialized (absent values
//! as `null`) so the JSON schema does not depend on which check produced it.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

/// One sampled point of a numeric sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub check: String,
    pub q: f64,
    pub point: Vec<f64>,
    pub residual: f64,
}

impl SweepRow {
    /// `check,q,point,residual` with point coordinates joined by `;`.
    pub fn to_delimited(&self) -> String {
        let point: Vec<String> = self.point.iter().map(|p| format!("{p:.17e}")).collect();
        format!("{},{},{},{:.6e}", self.check, self.q, point.join(";"), self.residual)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub check: String,
    pub tau: String,
    pub parameters: BTreeMap<String, String>,
    pub status: Status,
    /// Exact checks: number of terms in the residual polynomial.
    pub residual_terms: Option<usize>,
    /// Numeric checks: worst observed residual.
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub lhs_terms: Option<usize>,
    pub rhs_terms: Option<usize>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub elapsed_ms: u64,
    pub seed: Option<u64>,
    pub label: Option<String>,
    pub notes: Vec<String>,
    pub message: Option<String>,
    pub rows: Vec<SweepRow>,
}

impl IdentityReport {
    pub fn new(check: impl Into<String>, tau: impl Into<String>) -> Self {
        IdentityReport {
            check: check.into(),
            tau: tau.into(),
            parameters: BTreeMap::new(),
            status: Status::Error,
            residual_terms: None,
            residual: None,
            tolerance: None,
            lhs_terms: None,
            rhs_terms: None,
            lhs: None,
            rhs: None,
            elapsed_ms: 0,
            seed: None,
            label: None,
            notes: Vec::new(),
            message: None,
            rows: Vec::new(),
        }
    }

    /// Exact outcome: pass iff the residual has no terms.
    pub fn exact(mut self, residual_terms: usize) -> Self {
        self.residual_terms = Some(residual_terms);
        self.status = if residual_terms == 0 { Status::Pass } else { Status::Fail };
        self
    }

    /// Numeric outcome: pass iff the residual is finite and within tolerance.
    pub fn numeric(mut self, residual: f64, tolerance: f64) -> Self {
        self.residual = Some(residual);
        self.tolerance = Some(tolerance);
        self.status = if residual.is_finite() && residual <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        self
    }

    pub fn error(mut self, message: impl fmt::Display) -> Self {
        self.status = Status::Error;
        self.message = Some(message.to_string());
        self
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn sides<L: fmt::Display, R: fmt::Display>(mut self, lhs: (&L, usize), rhs: (&R, usize)) -> Self {
        self.lhs = Some(lhs.0.to_string());
        self.rhs = Some(rhs.0.to_string());
        self.lhs_terms = Some(lhs.1);
        self.rhs_terms = Some(rhs.1);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn elapsed(mut self, d: Duration) -> Self {
        self.elapsed_ms = d.as_millis() as u64;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Sort key for deterministic ordering: check, tau, then parameters.
    pub fn sort_key(&self) -> (String, String, Vec<(String, String)>) {
        (
            self.check.clone(),
            self.tau.clone(),
            self.parameters.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        )
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let mut line = format!("{:<5} {} [{}]", self.status.to_string().to_uppercase(), self.check, self.tau);
        for (k, v) in &self.parameters {
            line.push_str(&format!(" {k}={v}"));
        }
        if let Some(r) = self.residual_terms {
            line.push_str(&format!(" residual_terms={r}"));
        }
        if let Some(r) = self.residual {
            line.push_str(&format!(" residual={r:.3e}"));
        }
        if let (Some(l), Some(r)) = (self.lhs_terms, self.rhs_terms) {
            line.push_str(&format!(" lhs_terms={l} rhs_terms={r}"));
        }
        if let Some(label) = &self.label {
            line.push_str(&format!(" ({label})"));
        }
        if let Some(m) = &self.message {
            line.push_str(&format!(": {m}"));
        }
        line
    }
}

/// Aggregate of many reports in deterministic order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub max_k: u32,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub reports: Vec<IdentityReport>,
}

impl SuiteReport {
    pub fn new(seed: u64, max_k: u32, mut reports: Vec<IdentityReport>) -> Self {
        reports.sort_by_key(|r| r.sort_key());
        let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
        SuiteReport {
            seed,
            max_k,
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errors: count(Status::Error),
            reports,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_residual() {
        assert!(IdentityReport::new("fay", "t1").exact(0).passed());
        assert!(!IdentityReport::new("fay", "t1").exact(3).passed());
        assert!(IdentityReport::new("sine", "-").numeric(1e-13, 1e-11).passed());
        assert!(!IdentityReport::new("sine", "-").numeric(f64::NAN, 1e-11).passed());
    }

    #[test]
    fn json_has_every_field() {
        let r = IdentityReport::new("fay", "staircase-1").exact(0);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in [
            "check", "tau", "parameters", "status", "residual_terms", "residual", "tolerance",
            "lhs_terms", "rhs_terms", "lhs", "rhs", "elapsed_ms", "seed", "label", "notes", "message", "rows",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["status"], "pass");
        let back: IdentityReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn suite_orders_reports() {
        let a = IdentityReport::new("seventh", "staircase-1").exact(0);
        let b = IdentityReport::new("cubic-i", "staircase-2").exact(1);
        let s = SuiteReport::new(7, 2, vec![a, b]);
        assert_eq!(s.reports[0].check, "cubic-i");
        assert_eq!((s.passed, s.failed), (1, 1));
        assert!(!s.all_passed());
    }
}
