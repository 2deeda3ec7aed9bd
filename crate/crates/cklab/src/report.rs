//! Structured pass/fail reporting shared by every verification suite.
//!
//! A report is a flat list of entries. Each entry names the thing checked
//! (`tag`), the identity it instantiates in the equation catalog
//! (`equation`, e.g. `"(21.2a)"`), the measured residual, the tolerance the
//! residual was held to, and the verdict. Exact checks use residual 0.0 on
//! success and 1.0 on failure, with the offending expression quoted in
//! `detail`; numerical checks carry their actual floating-point residual.

use serde::{Deserialize, Serialize};

/// One verified (or falsified) fact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    /// Human-oriented label for what was checked, unique within a report.
    pub tag: String,
    /// Label in the equation catalog this check instantiates, or `"-"` for
    /// plumbing-level checks.
    pub equation: String,
    /// Measured residual. Exact checks report 0.0 (pass) or 1.0 (fail).
    pub residual: f64,
    /// Tolerance the residual was compared against; 0.0 for exact checks.
    pub tolerance: f64,
    /// Verdict for this entry.
    pub pass: bool,
    /// Optional diagnostic: the nonzero expression of a failed exact check,
    /// the value of a reported constant, and similar context.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Accumulated verification outcome.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<ReportEntry>,
    /// True iff every entry passes. An empty report is vacuously true.
    pub overall: bool,
}

impl VerificationReport {
    pub fn new() -> Self {
        VerificationReport {
            entries: Vec::new(),
            overall: true,
        }
    }

    /// Records an exact check: pass iff the residual expression normalized
    /// to zero. `detail` should quote the nonzero remainder on failure.
    pub fn push_exact(&mut self, tag: impl Into<String>, equation: impl Into<String>, pass: bool, detail: Option<String>) {
        self.push(ReportEntry {
            tag: tag.into(),
            equation: equation.into(),
            residual: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass,
            detail,
        });
    }

    /// Records a numerical check of `residual` against `tolerance`
    /// (pass iff `residual <= tolerance`, with NaN failing).
    pub fn push_numeric(&mut self, tag: impl Into<String>, equation: impl Into<String>, residual: f64, tolerance: f64) {
        self.push_numeric_detail(tag, equation, residual, tolerance, None);
    }

    /// As [`push_numeric`](Self::push_numeric), with diagnostic context.
    pub fn push_numeric_detail(
        &mut self,
        tag: impl Into<String>,
        equation: impl Into<String>,
        residual: f64,
        tolerance: f64,
        detail: Option<String>,
    ) {
        let pass = residual.is_finite() && residual <= tolerance;
        self.push(ReportEntry {
            tag: tag.into(),
            equation: equation.into(),
            residual,
            tolerance,
            pass,
            detail,
        });
    }

    /// Records a check that a value lies inside a closed interval — used for
    /// convergence-order ratios, where both too small and too large signal a
    /// broken derivative. The residual stored is the distance to the
    /// interval (0.0 inside).
    pub fn push_interval(
        &mut self,
        tag: impl Into<String>,
        equation: impl Into<String>,
        value: f64,
        low: f64,
        high: f64,
    ) {
        let residual = if !value.is_finite() {
            f64::INFINITY
        } else if value < low {
            low - value
        } else if value > high {
            value - high
        } else {
            0.0
        };
        let pass = residual == 0.0;
        self.push(ReportEntry {
            tag: tag.into(),
            equation: equation.into(),
            residual,
            tolerance: 0.0,
            pass,
            detail: Some(format!("value {value:.6e} expected in [{low}, {high}]")),
        });
    }

    pub fn push(&mut self, entry: ReportEntry) {
        self.overall = self.overall && entry.pass;
        self.entries.push(entry);
    }

    /// Appends all entries of `other`, combining verdicts.
    pub fn merge(&mut self, other: VerificationReport) {
        for entry in other.entries {
            self.push(entry);
        }
    }

    /// Applies a prefix to every tag, for disambiguating merged reports.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for entry in &mut self.entries {
            entry.tag = format!("{prefix}{}", entry.tag);
        }
        self
    }

    pub fn all_pass(&self) -> bool {
        self.overall
    }

    /// Entries that failed, for compact diagnostics.
    pub fn failures(&self) -> Vec<&ReportEntry> {
        self.entries.iter().filter(|e| !e.pass).collect()
    }

    /// Largest residual among numeric entries matching a tag fragment.
    pub fn max_residual_matching(&self, fragment: &str) -> Option<f64> {
        self.entries
            .iter()
            .filter(|e| e.tag.contains(fragment))
            .map(|e| e.residual)
            .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.max(r))))
    }
}
