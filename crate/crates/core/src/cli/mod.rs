//! Command-line front end: configuration, suite execution and reports.

mod report;
mod run;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::params::{make_params, ParamValue, Sign};
use crate::scalar::Real;

pub use report::{CertificateStatus, PointReport, Record, Report, Summary, SuiteReport};
pub use run::{emit_metrics, run};

/// Exit status when every record passes.
pub const EXIT_PASS: i32 = 0;
/// Exit status when some record fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for a configuration or i/o problem.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error("point {point}: {source}")]
    Parameter { point: String, source: Error },
    #[error(transparent)]
    Module(#[from] Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Metric,
    Rmatrix,
    Sigma,
    Hopf,
    Lorentz,
    Bigr,
    Minkowski,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Metric, Suite::Rmatrix, Suite::Sigma, Suite::Hopf, Suite::Lorentz, Suite::Bigr, Suite::Minkowski];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Metric => "metric",
            Suite::Rmatrix => "rmatrix",
            Suite::Sigma => "sigma",
            Suite::Hopf => "hopf",
            Suite::Lorentz => "lorentz",
            Suite::Bigr => "bigr",
            Suite::Minkowski => "minkowski",
        }
    }

    fn parse(s: &str) -> Result<Suite, ConfigError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| ConfigError::Invalid(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// One parameter point as configured.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSpec {
    pub q: ParamValue,
    pub r: ParamValue,
    #[serde(default = "plus")]
    pub branch: Sign,
}

fn plus() -> Sign {
    Sign::Plus
}

impl PointSpec {
    pub fn new(q: &str, r: &str, branch: Sign) -> Result<Self, ConfigError> {
        let value = |t: &str| t.parse::<ParamValue>().map_err(|e| ConfigError::Invalid(e.to_string()));
        Ok(PointSpec { q: value(q)?, r: value(r)?, branch })
    }

    pub fn label(&self) -> String {
        format!("q={},r={},{}", self.q, self.r, self.branch)
    }
}

/// The four sample points used when none are given.
pub fn default_points() -> Vec<PointSpec> {
    [("1", "0"), ("2", "0"), ("2", "1/3"), ("1/2", "1/5")]
        .into_iter()
        .map(|(q, r)| PointSpec::new(q, r, Sign::Plus).expect("valid literal"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub points: Vec<PointSpec>,
    pub precision_digits: u32,
    /// Residual threshold as a decimal, e.g. "1e-30". Defaults to 10^(−digits/2).
    pub tolerance: Option<String>,
    pub max_degree: usize,
    pub suites: BTreeSet<Suite>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub fixture: Option<PathBuf>,
    pub emit_metrics: Option<PathBuf>,
    /// Random degree-2 samples for the Hopf and module checks.
    pub samples: usize,
    pub seed: u64,
    /// Include wall times in the report.
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            points: default_points(),
            precision_digits: 60,
            tolerance: None,
            max_degree: 4,
            suites: Suite::ALL.into_iter().collect(),
            format: Format::Text,
            out: None,
            fixture: None,
            emit_metrics: None,
            samples: 20,
            seed: 7,
            timing: true,
        }
    }
}

impl SuiteConfig {
    /// Tolerance as a real at working precision, if overridden.
    pub fn tolerance_value(&self, bits: u32) -> Result<Option<Real>, ConfigError> {
        self.tolerance
            .as_deref()
            .map(|t| {
                let v = rug::Float::parse(t.trim())
                    .map_err(|e| ConfigError::Invalid(format!("tolerance {t:?}: {e}")))?;
                let v = Real::with_val(bits, v);
                if v.is_sign_negative() || !v.is_finite() {
                    return Err(ConfigError::Invalid(format!("tolerance {t:?} must be a finite non-negative number")));
                }
                Ok(v)
            })
            .transpose()
    }

    /// Build the parameter set of one point with the configured precision and tolerance.
    pub fn params(&self, pt: &PointSpec) -> Result<crate::params::ParameterSet, ConfigError> {
        let p = make_params(pt.q.clone(), pt.r.clone(), pt.branch, self.precision_digits)
            .map_err(|source| ConfigError::Parameter { point: pt.label(), source })?;
        Ok(match self.tolerance_value(p.prec.bits())? {
            Some(t) => p.with_tolerance(t),
            None => p,
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.points.is_empty() {
            return Err(ConfigError::Invalid("at least one parameter point is required".into()));
        }
        if self.suites.is_empty() {
            return Err(ConfigError::Invalid("no suite selected".into()));
        }
        if self.max_degree < 2 || self.max_degree > crate::frt::DEGREE_CAP {
            return Err(ConfigError::Invalid(format!(
                "max degree {} outside 2..={}",
                self.max_degree,
                crate::frt::DEGREE_CAP
            )));
        }
        for pt in &self.points {
            self.params(pt)?;
        }
        Ok(())
    }

    /// Read a config file: JSON for `.json`, flat `key = value` lines otherwise.
    pub fn from_file(path: &Path) -> Result<SuiteConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Module(Error::Io(format!("{}: {e}", path.display()))))?;
        if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| ConfigError::Invalid(format!("{}: {e}", path.display())))
        } else {
            SuiteConfig::from_flat(&text)
        }
    }

    /// Flat format: one `key = value` per line, `#` comments. Points are
    /// `point = q, r[, branch]` and may repeat.
    pub fn from_flat(text: &str) -> Result<SuiteConfig, ConfigError> {
        let mut cfg = SuiteConfig::default();
        let mut points = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| ConfigError::Invalid(format!("line {}: expected key = value", n + 1)))?;
            let bad = |what: &str| ConfigError::Invalid(format!("line {}: bad {what} {value:?}", n + 1));
            match key {
                "point" => {
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    let branch = match parts.get(2) {
                        Some(b) => b.parse().map_err(|_| bad("branch"))?,
                        None => Sign::Plus,
                    };
                    if parts.len() < 2 || parts.len() > 3 {
                        return Err(bad("point"));
                    }
                    points.push(PointSpec::new(parts[0], parts[1], branch)?);
                }
                "precision" | "precision_digits" => cfg.precision_digits = value.parse().map_err(|_| bad("precision"))?,
                "tolerance" => cfg.tolerance = Some(value.to_string()),
                "max_degree" | "max-degree" => cfg.max_degree = value.parse().map_err(|_| bad("max degree"))?,
                "suite" | "suites" => {
                    cfg.suites = value.split(',').map(Suite::parse).collect::<Result<_, _>>()?;
                }
                "format" => {
                    cfg.format = Format::from_str(value, true).map_err(|_| bad("format"))?;
                }
                "out" => cfg.out = Some(PathBuf::from(value)),
                "fixture" => cfg.fixture = Some(PathBuf::from(value)),
                "emit_metrics" | "emit-metrics" => cfg.emit_metrics = Some(PathBuf::from(value)),
                "samples" => cfg.samples = value.parse().map_err(|_| bad("sample count"))?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
                "timing" => cfg.timing = value.parse().map_err(|_| bad("timing flag"))?,
                other => return Err(ConfigError::Invalid(format!("line {}: unknown key {other:?}", n + 1))),
            }
        }
        if !points.is_empty() {
            cfg.points = points;
        }
        Ok(cfg)
    }
}

/// Verify quantum Lorentz group identities at arbitrary precision.
#[derive(Debug, Parser)]
#[command(name = "qlorentz", version)]
pub struct Args {
    /// Config file (.json, or flat key = value text).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Deformation parameter q; repeat for several points.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Vec<String>,
    /// Parameter r; one value for all points or one per --q.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Vec<String>,
    /// Root branch of a: + or −.
    #[arg(long, allow_hyphen_values = true)]
    pub branch: Option<String>,
    /// Working precision in decimal digits.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Residual tolerance, e.g. 1e-30.
    #[arg(long)]
    pub tolerance: Option<String>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Suites to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub suite: Vec<Suite>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the displayed-metric fixture.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    /// Write the Minkowski metrics and the fixture comparison as JSON.
    #[arg(long)]
    pub emit_metrics: Option<PathBuf>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Leave wall times out of the report.
    #[arg(long)]
    pub no_timing: bool,
}

impl Args {
    /// Defaults, then the config file, then flags.
    pub fn into_config(self) -> Result<SuiteConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => SuiteConfig::from_file(path)?,
            None => SuiteConfig::default(),
        };
        let branch = match &self.branch {
            Some(b) => Some(b.parse::<Sign>().map_err(|e| ConfigError::Invalid(e.to_string()))?),
            None => None,
        };
        if !self.q.is_empty() {
            let rs: Vec<&str> = match self.r.len() {
                0 => vec!["0"; self.q.len()],
                1 => vec![self.r[0].as_str(); self.q.len()],
                n if n == self.q.len() => self.r.iter().map(String::as_str).collect(),
                n => return Err(ConfigError::Invalid(format!("{} values of --q but {n} of --r", self.q.len()))),
            };
            cfg.points = self
                .q
                .iter()
                .zip(rs)
                .map(|(q, r)| PointSpec::new(q, r, branch.unwrap_or(Sign::Plus)))
                .collect::<Result<_, _>>()?;
        } else if !self.r.is_empty() {
            return Err(ConfigError::Invalid("--r needs --q".into()));
        } else if let Some(b) = branch {
            for pt in &mut cfg.points {
                pt.branch = b;
            }
        }
        if let Some(v) = self.precision {
            cfg.precision_digits = v;
        }
        if self.tolerance.is_some() {
            cfg.tolerance = self.tolerance;
        }
        if let Some(v) = self.max_degree {
            cfg.max_degree = v;
        }
        if !self.suite.is_empty() {
            cfg.suites = self.suite.into_iter().collect();
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        cfg.out = self.out.or(cfg.out);
        cfg.fixture = self.fixture.or(cfg.fixture);
        cfg.emit_metrics = self.emit_metrics.or(cfg.emit_metrics);
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if self.no_timing {
            cfg.timing = false;
        }
        Ok(cfg)
    }
}

/// Parse arguments, run, write the report; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let outcome = args.into_config().and_then(|cfg| {
        cfg.validate()?;
        if let Some(path) = &cfg.emit_metrics {
            emit_metrics(&cfg, path)?;
        }
        let report = run(&cfg)?;
        let text = match cfg.format {
            Format::Text => report.to_text(),
            Format::Json => report.to_json(),
        };
        match &cfg.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| ConfigError::Module(Error::Io(format!("{}: {e}", path.display()))))?,
            None => print!("{text}"),
        }
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("qlorentz: {e}");
            EXIT_CONFIG
        }
    }
}
