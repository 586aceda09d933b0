//! Run selected suites through the library entry point and inspect the
//! report without going through the command line.

use qlorentz::cli::{run, PointSpec, Suite, SuiteConfig};
use qlorentz::params::Sign;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SuiteConfig {
        points: vec![PointSpec::new("1", "0", Sign::Plus)?, PointSpec::new("2", "1/3", Sign::Plus)?],
        suites: [Suite::Metric, Suite::Rmatrix, Suite::Sigma].into_iter().collect(),
        timing: false,
        ..SuiteConfig::default()
    };
    let report = run(&cfg)?;
    println!("{} records, verdict {}", report.summary.records, report.verdict);
    for pt in &report.points {
        println!("{}: {} fixture mismatches", pt.point, pt.fixture_mismatches.len());
    }
    for r in report.failures() {
        println!("failed: {} at {}", r.id, r.point);
    }
    let json = report.to_json();
    println!("json report is {} bytes", json.len());
    Ok(())
}
