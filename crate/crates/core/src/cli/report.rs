use std::fmt::Write as _;

use serde::Serialize;

use super::Suite;
use crate::check::{Check, Expectation};
use crate::frt::Certificate;
use crate::scalar::sci;
use crate::sigma::fixture::FixtureEntry;

/// One verified identity at one point.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub id: String,
    pub point: String,
    pub residual: String,
    pub tolerance: String,
    pub expectation: Expectation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    pub fn from_check(c: &Check, point: &str) -> Self {
        Record {
            id: c.id.clone(),
            point: point.to_string(),
            residual: sci(&c.residual),
            tolerance: sci(&c.tolerance),
            expectation: c.expect,
            pass: c.passed(),
            note: c.note.clone(),
        }
    }

    /// A module error turned into a failing record.
    pub fn error(id: String, point: &str, message: String) -> Self {
        Record {
            id,
            point: point.to_string(),
            residual: "NaN".into(),
            tolerance: "-".into(),
            expectation: Expectation::Holds,
            pass: false,
            note: Some(message),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    /// Wall time of the whole suite at this point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
    pub records: Vec<Record>,
}

/// Normal-form engine status for one algebra.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateStatus {
    pub algebra: String,
    pub diamond_residual: String,
    pub table_residual: String,
    pub words_checked: usize,
    pub capped: bool,
    pub fallback: bool,
}

impl CertificateStatus {
    pub fn new(algebra: &str, c: &Certificate) -> Self {
        CertificateStatus {
            algebra: algebra.to_string(),
            diamond_residual: sci(&c.diamond_residual),
            table_residual: sci(&c.table_residual),
            words_checked: c.words_checked,
            capped: c.capped,
            fallback: c.fallback,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub point: String,
    pub suites: Vec<SuiteReport>,
    pub certificates: Vec<CertificateStatus>,
    pub fixture_mismatches: Vec<FixtureEntry>,
}

impl PointReport {
    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.suites.iter().flat_map(|s| s.records.iter())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub records: usize,
    pub failed: usize,
    pub expected_failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub precision_digits: u32,
    pub max_degree: usize,
    pub suites: Vec<Suite>,
    pub points: Vec<PointReport>,
    pub summary: Summary,
    pub verdict: &'static str,
}

impl Report {
    pub fn new(precision_digits: u32, max_degree: usize, suites: Vec<Suite>, points: Vec<PointReport>) -> Self {
        let all: Vec<&Record> = points.iter().flat_map(PointReport::records).collect();
        let failed = all.iter().filter(|r| !r.pass).count();
        let summary = Summary {
            records: all.len(),
            failed,
            expected_failures: all.iter().filter(|r| r.expectation == Expectation::Fails && r.pass).count(),
        };
        Report {
            precision_digits,
            max_degree,
            suites,
            points,
            summary,
            verdict: if failed == 0 { "pass" } else { "fail" },
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.points.iter().flat_map(PointReport::records)
    }

    pub fn find(&self, point: &str, id: &str) -> Option<&Record> {
        self.records().find(|r| r.point == point && r.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.suites.iter().map(|s| s.name()).collect();
        let _ = writeln!(out, "qlorentz report: {} digits, max degree {}", self.precision_digits, self.max_degree);
        let _ = writeln!(out, "suites: {}", names.join(" "));
        for pt in &self.points {
            let _ = writeln!(out, "\npoint {}", pt.point);
            for s in &pt.suites {
                match s.wall_time_ms {
                    Some(ms) => {
                        let _ = writeln!(out, "  [{}] {ms} ms", s.suite);
                    }
                    None => {
                        let _ = writeln!(out, "  [{}]", s.suite);
                    }
                }
                for r in &s.records {
                    let tag = if r.pass { "ok  " } else { "FAIL" };
                    let exp = match r.expectation {
                        Expectation::Holds => "",
                        Expectation::Fails => " (expected to fail)",
                        Expectation::Info => " (info)",
                    };
                    let _ = write!(out, "    {tag} {} residual {} tol {}{exp}", r.id, r.residual, r.tolerance);
                    if let Some(n) = &r.note {
                        let _ = write!(out, ": {n}");
                    }
                    out.push('\n');
                }
            }
            for c in &pt.certificates {
                let _ = writeln!(
                    out,
                    "  certificate {}: diamond {} table {} over {} words{}{}",
                    c.algebra,
                    c.diamond_residual,
                    c.table_residual,
                    c.words_checked,
                    if c.capped { ", step cap hit" } else { "" },
                    if c.fallback { ", fallback to linear reduction" } else { "" }
                );
            }
            for f in &pt.fixture_mismatches {
                let _ = writeln!(
                    out,
                    "  fixture mismatch {}{} [{},{}] {}: displayed {} computed {} (residual {})",
                    f.matrix, f.sign, f.row, f.col, f.expression, f.displayed, f.computed, f.residual
                );
            }
        }
        let _ = writeln!(
            out,
            "\nverdict: {} ({} records, {} failed, {} expected failures observed)",
            self.verdict, self.summary.records, self.summary.failed, self.summary.expected_failures
        );
        out
    }
}
