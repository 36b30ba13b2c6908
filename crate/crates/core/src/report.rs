//! Comparison rows produced by every check, and their CSV/JSON serialization.

use std::io::Write;

use serde::{Deserialize, Serialize};

/// One comparison `lhs` vs `rhs` with its verdict.
///
/// `rel_err = |lhs − rhs| / |rhs|` when `rhs ≠ 0`, otherwise `|lhs − rhs|`.
/// A row passes iff `rel_err ≤ tolerance`, or the check is exact and
/// `abs_err = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub scenario: String,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ComparisonRow {
    pub fn new(scenario: &str, check: &str, lhs: f64, rhs: f64, tolerance: f64, exact: bool) -> Self {
        let abs_err = (lhs - rhs).abs();
        let rel_err = if rhs != 0.0 { abs_err / rhs.abs() } else { abs_err };
        let pass = rel_err <= tolerance || (exact && abs_err == 0.0);
        Self { scenario: scenario.into(), check: check.into(), lhs, rhs, abs_err, rel_err, tolerance, pass }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<ComparisonRow>,
}

pub const CSV_HEADER: [&str; 8] = ["scenario", "check", "lhs", "rhs", "abs_err", "rel_err", "tolerance", "pass"];

impl Report {
    pub fn summary(&self) -> Summary {
        let passed = self.rows.iter().filter(|r| r.pass).count();
        Summary { total: self.rows.len(), passed, failed: self.rows.len() - passed }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Fixed column order; floats with 17 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.scenario.clone(),
                r.check.clone(),
                format!("{:.16e}", r.lhs),
                format!("{:.16e}", r.rhs),
                format!("{:.16e}", r.abs_err),
                format!("{:.16e}", r.rel_err),
                format!("{:.16e}", r.tolerance),
                r.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `{"rows": [...], "summary": {...}}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            rows: &'a [ComparisonRow],
            summary: Summary,
        }
        serde_json::to_string_pretty(&Out { rows: &self.rows, summary: self.summary() }).expect("report serializes")
    }
}
