//! A single verified identity: residual, tolerance and what outcome is expected.

use std::fmt;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::scalar::{sci, Real};

/// What the caller expects of a residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    /// Residual must be within tolerance.
    Holds,
    /// Residual must exceed tolerance (a predicted failure, e.g. a non-central witness).
    Fails,
    /// Recorded for information only, never affects a verdict.
    Info,
}

#[derive(Clone)]
pub struct Check {
    pub id: String,
    pub residual: Real,
    pub tolerance: Real,
    pub expect: Expectation,
    pub note: Option<String>,
}

impl Check {
    fn new(id: impl Into<String>, residual: Real, tol: &Real, expect: Expectation) -> Self {
        let tolerance = Float::with_val(residual.prec().max(tol.prec()), tol);
        Check { id: id.into(), residual, tolerance, expect, note: None }
    }

    pub fn holds(id: impl Into<String>, residual: Real, tol: &Real) -> Self {
        Check::new(id, residual, tol, Expectation::Holds)
    }

    pub fn fails(id: impl Into<String>, residual: Real, tol: &Real) -> Self {
        Check::new(id, residual, tol, Expectation::Fails)
    }

    pub fn info(id: impl Into<String>, residual: Real, tol: &Real) -> Self {
        Check::new(id, residual, tol, Expectation::Info)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Residual strictly above tolerance (NaN counts as above).
    pub fn exceeds(&self) -> bool {
        self.residual.is_nan() || self.residual > self.tolerance
    }

    pub fn passed(&self) -> bool {
        match self.expect {
            Expectation::Holds => !self.exceeds(),
            Expectation::Fails => self.exceeds(),
            Expectation::Info => true,
        }
    }
}

impl fmt::Debug for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:?}] residual {} tol {}{}",
            self.id,
            self.expect,
            sci(&self.residual),
            sci(&self.tolerance),
            self.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        )
    }
}

/// Largest of a set of residuals; zero at `bits` precision when empty.
pub fn max_residual(bits: u32, it: impl IntoIterator<Item = Real>) -> Real {
    it.into_iter().fold(Float::new(bits), |m, x| if x > m || x.is_nan() { x } else { m })
}

/// All checks passed.
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}
