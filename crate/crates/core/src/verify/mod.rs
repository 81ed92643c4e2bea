//! Mechanical checks of the structural theorems, conjecture scans, and the
//! independent oracles they are measured against.
//!
//! Theorem-level checks decide the exit status of a verification run;
//! conjecture rows (check names starting with `conjecture`) are reported only.

pub mod checks;
pub mod conjectures;
pub mod f2;
pub mod oracle;
pub mod suite;

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use checks::*;
pub use conjectures::scan_conjectures;
pub use oracle::{brute_force_homology, dense_smith, oracle_jones};
pub use suite::{run_suites, Report, Suite, VerifyOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub subject: String,
    pub passed: bool,
    /// First counterexample or mismatch when failed; a note otherwise.
    pub detail: String,
}

impl CheckResult {
    pub fn pass(check: &str, subject: &str, detail: impl Into<String>) -> Self {
        CheckResult {
            check: check.into(),
            subject: subject.into(),
            passed: true,
            detail: detail.into(),
        }
    }

    pub fn fail(check: &str, subject: &str, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        debug_assert!(!detail.is_empty());
        CheckResult {
            check: check.into(),
            subject: subject.into(),
            passed: false,
            detail,
        }
    }

    pub fn from_outcome(
        check: &str,
        subject: &str,
        outcome: std::result::Result<String, String>,
    ) -> Self {
        match outcome {
            Ok(note) => Self::pass(check, subject, note),
            Err(why) => Self::fail(check, subject, why),
        }
    }

    pub fn is_conjecture(&self) -> bool {
        self.check.starts_with("conjecture")
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} [{}]", self.check, self.subject)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Writes `check,subject,passed,detail` rows.
pub fn write_report_csv<W: Write>(out: W, results: &[CheckResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["check", "subject", "passed", "detail"])?;
    for r in results {
        w.write_record([
            r.check.as_str(),
            r.subject.as_str(),
            if r.passed { "true" } else { "false" },
            r.detail.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_report_csv(text: &str) -> Result<Vec<CheckResult>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        out.push(CheckResult {
            check: row[0].to_string(),
            subject: row[1].to_string(),
            passed: &row[2] == "true",
            detail: row[3].to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            CheckResult::pass("d_squared", "3_1", ""),
            CheckResult::fail("theorem_a", "x, \"y\"", "order 3 at (1,2)"),
        ];
        let mut buf = Vec::new();
        write_report_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("check,subject,passed,detail\n"));
        assert_eq!(read_report_csv(&text).unwrap(), rows);
    }
}
