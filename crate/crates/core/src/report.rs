//! Validation and diagnostic reports.

use serde::Serialize;
use std::fmt;

/// Default tolerance for residual comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Default number of violations kept per report.
pub const DEFAULT_REPORT_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub tolerance: f64,
    pub report_cap: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { tolerance: DEFAULT_TOLERANCE, report_cap: DEFAULT_REPORT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Short name of the violated condition, e.g. `"pentagon"`.
    pub check: &'static str,
    /// Index tuple at which the condition fails, rendered for humans.
    pub at: String,
    /// `|lhs - rhs|`, or 1.0 for boolean conditions.
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} (residual {:.3e})", self.check, self.at, self.residual)
    }
}

/// Outcome of a validator: every violation found (up to the cap) plus the
/// largest residual seen over all checked instances, violating or not.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub name: &'static str,
    pub violations: Vec<Violation>,
    /// Violations found beyond the cap.
    pub suppressed: usize,
    pub checked: usize,
    pub max_residual: f64,
    #[serde(skip)]
    cap: usize,
    #[serde(skip)]
    tolerance: f64,
}

impl ValidationReport {
    pub fn new(name: &'static str, cfg: &CheckConfig) -> Self {
        Self {
            name,
            violations: Vec::new(),
            suppressed: 0,
            checked: 0,
            max_residual: 0.0,
            cap: cfg.report_cap,
            tolerance: cfg.tolerance,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty() && self.suppressed == 0
    }

    pub fn violation_count(&self) -> usize {
        self.violations.len() + self.suppressed
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Records a residual; it becomes a violation when it exceeds the tolerance.
    pub fn residual(&mut self, check: &'static str, residual: f64, at: impl FnOnce() -> String) {
        self.checked += 1;
        let r = if residual.is_nan() { f64::INFINITY } else { residual };
        if r > self.max_residual {
            self.max_residual = r;
        }
        if r > self.tolerance {
            self.push(check, r, at);
        }
    }

    /// Records a boolean condition.
    pub fn require(&mut self, check: &'static str, holds: bool, at: impl FnOnce() -> String) {
        self.checked += 1;
        if !holds {
            if self.max_residual < 1.0 {
                self.max_residual = 1.0;
            }
            self.push(check, 1.0, at);
        }
    }

    fn push(&mut self, check: &'static str, residual: f64, at: impl FnOnce() -> String) {
        if self.violations.len() < self.cap {
            self.violations.push(Violation { check, at: at(), residual });
        } else {
            self.suppressed += 1;
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.checked += other.checked;
        self.max_residual = self.max_residual.max(other.max_residual);
        for v in other.violations {
            if self.violations.len() < self.cap {
                self.violations.push(v);
            } else {
                self.suppressed += 1;
            }
        }
        self.suppressed += other.suppressed;
    }

    pub fn into_result(self) -> crate::Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(crate::Error::Invalid(self.to_string()))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(
                f,
                "{}: ok ({} checks, max residual {:.3e})",
                self.name, self.checked, self.max_residual
            );
        }
        write!(
            f,
            "{}: {} violation(s) in {} checks, max residual {:.3e}",
            self.name,
            self.violation_count(),
            self.checked,
            self.max_residual
        )?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        if self.suppressed > 0 {
            write!(f, "\n  ... {} more", self.suppressed)?;
        }
        Ok(())
    }
}

/// Non-fatal numeric diagnostic: one row per inspected item.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub name: &'static str,
    pub rows: Vec<DiagnosticRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticRow {
    pub item: String,
    pub observed: f64,
    pub expected: f64,
    pub deviation: f64,
    pub flagged: bool,
}

impl DiagnosticReport {
    pub fn flagged(&self) -> impl Iterator<Item = &DiagnosticRow> {
        self.rows.iter().filter(|r| r.flagged)
    }
}

impl fmt::Display for DiagnosticReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (diagnostic)", self.name)?;
        for r in &self.rows {
            write!(
                f,
                "\n  {}: observed {:.6}, expected {:.6}, deviation {:.3e}{}",
                r.item,
                r.observed,
                r.expected,
                r.deviation,
                if r.flagged { "  [deviates]" } else { "" }
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_counts_suppressed() {
        let cfg = CheckConfig { tolerance: 1e-9, report_cap: 2 };
        let mut r = ValidationReport::new("t", &cfg);
        for i in 0..5 {
            r.residual("x", 1.0, || format!("{i}"));
        }
        r.residual("x", 1e-12, || "fine".into());
        assert_eq!(r.violations.len(), 2);
        assert_eq!(r.suppressed, 3);
        assert_eq!(r.checked, 6);
        assert!(!r.is_ok());
    }

    #[test]
    fn nan_residual_is_a_violation() {
        let mut r = ValidationReport::new("t", &CheckConfig::default());
        r.residual("x", f64::NAN, || "nan".into());
        assert!(!r.is_ok());
    }
}
