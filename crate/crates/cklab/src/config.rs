//! Batch-run configuration, driver, and report emission.
//!
//! A [`RunConfig`] — whether assembled from command-line flags or loaded
//! as a single JSON document — selects a command, a dimension range, an
//! optional family parameter block, tolerance overrides, sampling
//! controls, and the output shape. [`execute`] runs the corresponding
//! suites and returns a [`RunReport`]; [`emit_report`] renders it as
//! JSON or CSV with full binary64 round-trip precision. [`table_dump`]
//! tabulates a closed-form septuple on an exact rational grid.
//!
//! # Invariants
//!
//! - Determinism: identical configs (same seed) produce identical
//!   reports apart from the `run_id` field. Parallel fan-out merges
//!   partial results in index order and never affects content.
//! - Rationals cross this boundary as `"p/q"` or decimal strings and
//!   are converted exactly (base-10 scaling), never through binary
//!   floats.
//! - Structural problems — unparsable config, m-range outside [1, 16],
//!   nonpositive tolerance, inconsistent parameter block — are
//!   configuration errors and nothing runs. Once a config is accepted,
//!   downstream failures (a family rejecting its parameters, a chart
//!   with no positive window) surface as failed report entries with
//!   diagnostic text, so the written report reflects everything that
//!   was attempted.
//! - The `all` command never short-circuits: every suite runs and
//!   contributes entries even after earlier failures.
//! - JSON reports round-trip: parsing an emitted report reproduces it
//!   field for field. Non-finite residuals (which can only arise from a
//!   numerical breakdown that is itself reported as a failure) are
//!   clamped to the largest finite value so the JSON stays valid.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{parse_rational, rational_to_f64, ExactError, Rational};
use crate::report::{ReportEntry, VerificationReport};
use crate::septuple::{CaseParams, Eps};
use crate::suites::{
    apply_tolerance_overrides, bb_suite, criterion5_configs, dim3_suite, geometry_suite,
    identity_suite, ode_suite, product_suite, septuple_suite, third_order_suite, BaseKind,
    GeometryConfig, GeometrySuiteOptions,
};
use crate::tol::{DEFAULT_FD_STEP, ODE_REFERENCE_STEP};

/// Which suite (or aggregate) a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Exact special-function identity web over the m-range.
    Identities,
    /// Seeded family draws through the exact system and integral checks,
    /// plus the third-order equation basis.
    Septuple,
    /// Runge–Kutta cross-checks of the three families.
    Ode,
    /// Assembled-chart certification: the reference batch, or a single
    /// configuration described by the parameter block.
    Geometry,
    /// The distinguished-configuration identity and its assembled chart.
    Bb,
    /// Every suite above plus the product example and the relaxed
    /// higher-dimension batch, with short-circuiting disabled.
    All,
}

/// Report serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

/// Closed-form family selector for parameter blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
}

/// Family parameters for a single-configuration geometry run (or a
/// table dump), with rationals as exact strings.
///
/// Families i and ii use `K`, `alpha`, `eta` (any may be omitted for 0,
/// but not all three); family iii uses `A`, `B`, `C`, `c`. The
/// orientation sign `eps` is `"0"` for family i and `"+1"`/`"-1"`
/// otherwise. `tau_lo`/`tau_hi` pin the working interval; when omitted
/// the driver searches for a positive window on the correct side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseBlock {
    pub case: CaseLabel,
    pub m: u32,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub coef_a: Option<String>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub coef_b: Option<String>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub coef_c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_hi: Option<f64>,
}

/// One batch run: a single JSON document (or the equivalent flags).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Dimension range [lo, hi], both within [1, 16]; each command has
    /// its own default when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_range: Option<[u32; 2]>,
    /// Single-configuration parameter block (geometry command only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseBlock>,
    /// Tolerance overrides: every numeric entry whose tag contains the
    /// key gets the given tolerance.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    /// Draws per family (septuple) or chart points per configuration
    /// (geometry): per-command defaults when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    /// Seed for every pseudo-random draw in the run (recorded here so a
    /// report can be replayed).
    #[serde(default)]
    pub seed: u64,
    /// Finite-difference step (geometry) or integration step (ode);
    /// per-command defaults when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    /// Report destination; standard output when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: ReportFormat,
}

/// Configuration and output failures, split by exit-code class: a
/// config error means nothing ran (exit 2); an output error means the
/// run finished but the report could not be written (exit 1).
#[derive(Debug, Error)]
pub enum ConfigError {
    /// Malformed config document (exit 2).
    #[error("config parse: {0}")]
    Parse(String),
    /// Structurally invalid configuration (exit 2).
    #[error("config: {0}")]
    Invalid(String),
    /// Report emission failed (exit 1).
    #[error("i/o: {0}")]
    Io(String),
}

impl RunConfig {
    /// Parses a config from its JSON document form.
    ///
    /// # Errors
    ///
    /// [`ConfigError::Parse`] on malformed JSON or unknown fields;
    /// [`ConfigError::Invalid`] if the parsed config fails validation.
    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Checks the structural invariants listed on the type.
    ///
    /// # Errors
    ///
    /// [`ConfigError::Invalid`] with a description of the first
    /// violation found.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some([lo, hi]) = self.m_range {
            if lo < 1 || hi > 16 || lo > hi {
                return Err(ConfigError::Invalid(format!(
                    "m_range must satisfy 1 <= lo <= hi <= 16, got [{lo}, {hi}]"
                )));
            }
        }
        for (tag, tol) in &self.tolerances {
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "tolerance for {tag:?} must be positive and finite, got {tol}"
                )));
            }
        }
        if let Some(n) = self.sample_count {
            if n == 0 {
                return Err(ConfigError::Invalid("sample_count must be at least 1".into()));
            }
        }
        if let Some(h) = self.fd_step {
            if !(h.is_finite() && h > 0.0 && h <= 0.1) {
                return Err(ConfigError::Invalid(format!(
                    "fd_step must lie in (0, 0.1], got {h}"
                )));
            }
        }
        if let Some(block) = &self.case {
            if self.command != Command::Geometry {
                return Err(ConfigError::Invalid(
                    "a case parameter block only applies to the geometry command".into(),
                ));
            }
            block.validate()?;
        }
        Ok(())
    }

    /// The m-range to use, falling back to this command's default.
    fn resolved_m_range(&self, default: [u32; 2]) -> (u32, u32) {
        let [lo, hi] = self.m_range.unwrap_or(default);
        (lo, hi)
    }
}

impl CaseBlock {
    fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        if self.m < 2 || self.m > 16 {
            return invalid(format!(
                "geometry requires 2 <= m <= 16 (real dimension >= 4), got m = {}",
                self.m
            ));
        }
        match self.case {
            CaseLabel::I | CaseLabel::II => {
                if self.coef_a.is_some()
                    || self.coef_b.is_some()
                    || self.coef_c.is_some()
                    || self.c.is_some()
                {
                    return invalid(format!(
                        "A/B/C/c belong to family iii, not family {}",
                        self.family_name()
                    ));
                }
                if self.k.is_none() && self.alpha.is_none() && self.eta.is_none() {
                    return invalid(format!(
                        "family {} needs at least one of K, alpha, eta",
                        self.family_name()
                    ));
                }
            }
            CaseLabel::III => {
                if self.k.is_some() || self.alpha.is_some() || self.eta.is_some() {
                    return invalid("K/alpha/eta belong to families i and ii, not iii".into());
                }
                if self.coef_a.is_none() && self.coef_b.is_none() && self.coef_c.is_none() {
                    return invalid("family iii needs at least one of A, B, C".into());
                }
                if self.c.is_none() {
                    return invalid("family iii needs a nonzero affine offset c".into());
                }
            }
        }
        let eps = self.parsed_eps()?;
        match (self.case, eps) {
            (CaseLabel::I, Eps::Zero) => {}
            (CaseLabel::I, _) => {
                return invalid("family i pairs with eps = 0 only".into());
            }
            (_, Eps::Zero) => {
                return invalid(format!(
                    "family {} needs an orientation sign eps = +1 or -1",
                    self.family_name()
                ));
            }
            _ => {}
        }
        if let Some(a) = self.a {
            if !(a.is_finite() && a != 0.0) {
                return invalid(format!("the coupling a must be finite and nonzero, got {a}"));
            }
        }
        match (self.tau_lo, self.tau_hi) {
            (None, None) => {}
            (Some(lo), Some(hi)) => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return invalid(format!(
                        "need finite tau_lo < tau_hi, got [{lo}, {hi}]"
                    ));
                }
            }
            _ => {
                return invalid("tau_lo and tau_hi must be given together".into());
            }
        }
        // Parse every rational up front so a typo is a config error.
        for (name, text) in [
            ("K", &self.k),
            ("alpha", &self.alpha),
            ("eta", &self.eta),
            ("A", &self.coef_a),
            ("B", &self.coef_b),
            ("C", &self.coef_c),
            ("c", &self.c),
        ] {
            if let Some(text) = text {
                if parse_rational(text).is_none() {
                    return invalid(format!(
                        "{name} must be an integer, p/q, or decimal string, got {text:?}"
                    ));
                }
            }
        }
        if self.case == CaseLabel::III {
            if let Some(c) = &self.c {
                if parse_rational(c) == Some(Rational::from_integer(0.into())) {
                    return invalid("family iii needs c != 0 (c = 0 is family ii)".into());
                }
            }
        }
        Ok(())
    }

    fn family_name(&self) -> &'static str {
        match self.case {
            CaseLabel::I => "i",
            CaseLabel::II => "ii",
            CaseLabel::III => "iii",
        }
    }

    fn rational_field(field: &Option<String>) -> Rational {
        field
            .as_deref()
            .and_then(parse_rational)
            .unwrap_or_else(|| Rational::from_integer(0.into()))
    }

    /// The family parameters this block describes (validation must have
    /// passed).
    pub fn to_case_params(&self) -> CaseParams {
        match self.case {
            CaseLabel::I => CaseParams::I {
                m: self.m,
                k: Self::rational_field(&self.k),
                alpha: Self::rational_field(&self.alpha),
                eta: Self::rational_field(&self.eta),
            },
            CaseLabel::II => CaseParams::II {
                m: self.m,
                k: Self::rational_field(&self.k),
                alpha: Self::rational_field(&self.alpha),
                eta: Self::rational_field(&self.eta),
            },
            CaseLabel::III => CaseParams::III {
                m: self.m,
                coef_a: Self::rational_field(&self.coef_a),
                coef_b: Self::rational_field(&self.coef_b),
                coef_c: Self::rational_field(&self.coef_c),
                c: Self::rational_field(&self.c),
            },
        }
    }

    fn parsed_eps(&self) -> Result<Eps, ConfigError> {
        let default = match self.case {
            CaseLabel::I => "0",
            _ => "+1",
        };
        match self.eps.as_deref().unwrap_or(default).trim() {
            "+1" | "1" | "plus" => Ok(Eps::Plus),
            "0" | "zero" => Ok(Eps::Zero),
            "-1" | "minus" => Ok(Eps::Minus),
            other => Err(ConfigError::Invalid(format!(
                "eps must be +1, 0, or -1, got {other:?}"
            ))),
        }
    }
}

/// A finished run: the merged report plus the config that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Unique per invocation (wall-clock based); the only field two runs
    /// of the same config may differ in.
    pub run_id: String,
    pub config_echo: RunConfig,
    pub entries: Vec<ReportEntry>,
    pub overall: bool,
}

impl RunReport {
    fn new(config: RunConfig, report: VerificationReport) -> RunReport {
        let overall = report.overall;
        let entries = report
            .entries
            .into_iter()
            .map(|mut e| {
                if !e.residual.is_finite() {
                    e.residual = f64::MAX;
                }
                if !e.tolerance.is_finite() {
                    e.tolerance = f64::MAX;
                }
                e
            })
            .collect();
        RunReport {
            run_id: fresh_run_id(),
            config_echo: config,
            entries,
            overall,
        }
    }

    /// Parses a JSON report emitted by [`emit_report`].
    ///
    /// # Errors
    ///
    /// [`ConfigError::Parse`] on malformed JSON.
    pub fn from_json(text: &str) -> Result<RunReport, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }
}

fn fresh_run_id() -> String {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("run-{}-{:09}", now.as_secs(), now.subsec_nanos())
}

/// Appends a suite result: entries on success, one failing diagnostic
/// entry when the suite could not run at all.
fn merge_suite<E: std::fmt::Display>(
    report: &mut VerificationReport,
    label: &str,
    outcome: Result<VerificationReport, E>,
) {
    match outcome {
        Ok(partial) => report.merge(partial),
        Err(error) => report.push_exact(
            "driver",
            "(suite-error)",
            false,
            Some(format!("{label}: {error}")),
        ),
    }
}

/// Searches for a τ-window on the side of c selected by the orientation
/// sign where the gradient profile Q stays positive, then trims 10%
/// from each end. Family i (sign 0) searches the positive axis first,
/// then the negative axis, keeping clear of τ = 0.
fn auto_interval(
    params: &CaseParams,
    eps: Eps,
) -> Result<(f64, f64), String> {
    let fns = params.build().map_err(|e| e.to_string())?;
    let c = match params {
        CaseParams::III { c, .. } => rational_to_f64(c),
        _ => 0.0,
    };
    let scan = |lo: f64, hi: f64| -> Option<(f64, f64)> {
        const N: usize = 2000;
        let q = |t: f64| fns.grad_sq.eval_f64(t);
        let mut best: Option<(usize, usize)> = None;
        let mut run_start: Option<usize> = None;
        for k in 0..=N {
            let tau = lo + (hi - lo) * k as f64 / N as f64;
            let positive = q(tau).is_finite() && q(tau) > 0.0;
            match (positive, run_start) {
                (true, None) => run_start = Some(k),
                (false, Some(s)) => {
                    if best.map_or(true, |(a, b)| k - 1 - s > b - a) {
                        best = Some((s, k - 1));
                    }
                    run_start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = run_start {
            if best.map_or(true, |(a, b)| N - s > b - a) {
                best = Some((s, N));
            }
        }
        let (a, b) = best?;
        let t = |k: usize| lo + (hi - lo) * k as f64 / N as f64;
        let (wlo, whi) = (t(a), t(b));
        let width = whi - wlo;
        if width < 0.2 {
            return None;
        }
        Some((wlo + 0.1 * width, whi - 0.1 * width))
    };
    let margin = 0.02 * c.abs().max(1.0);
    let window = match eps {
        Eps::Plus => scan(c + margin, c + margin + 4.0),
        Eps::Minus => scan(c - margin - 4.0, c - margin),
        Eps::Zero => scan(0.05, 4.0).or_else(|| scan(-4.0, -0.05)),
    };
    window.ok_or_else(|| {
        "no positive Q-window found on the selected side; pass tau_lo/tau_hi explicitly"
            .to_string()
    })
}

/// Builds the single-configuration geometry run a parameter block
/// describes. Interval search failures are returned as strings so the
/// driver can surface them as failed entries.
fn geometry_config_from_block(
    block: &CaseBlock,
    sample_count: Option<usize>,
) -> Result<(GeometryConfig, usize), String> {
    let params = block.to_case_params();
    let eps = block
        .parsed_eps()
        .map_err(|e| e.to_string())?;
    let interval = match (block.tau_lo, block.tau_hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => auto_interval(&params, eps)?,
    };
    let base = if block.m == 2 {
        BaseKind::Surface
    } else {
        BaseKind::FubiniStudy {
            q: block.m as usize - 1,
        }
    };
    let config = GeometryConfig {
        label: format!("custom-case-{}", block.family_name()),
        params,
        eps,
        a: block.a.unwrap_or(1.0),
        interval,
        base,
        negative_controls: false,
    };
    Ok((config, sample_count.unwrap_or(20)))
}

/// Runs the configured command and collects the merged report.
///
/// # Errors
///
/// [`ConfigError::Invalid`] if validation fails; once validation
/// passes, every downstream problem is a failed entry, not an error.
pub fn execute(config: &RunConfig) -> Result<RunReport, ConfigError> {
    config.validate()?;
    let mut report = VerificationReport::new();
    let seed = config.seed;
    let fd_step = config.fd_step.unwrap_or(DEFAULT_FD_STEP);
    let ode_step = config.fd_step.unwrap_or(ODE_REFERENCE_STEP);

    let run_identities = |report: &mut VerificationReport, range: (u32, u32)| {
        merge_suite(report, "identities", identity_suite(range.0, range.1));
    };
    let run_septuple = |report: &mut VerificationReport, range: (u32, u32), draws: usize| {
        let ms: Vec<u32> = (range.0..=range.1).collect();
        merge_suite(report, "septuple", septuple_suite(&ms, draws, seed));
        merge_suite(report, "third-order", third_order_suite(range.0, range.1));
    };
    let run_geometry_batch = |report: &mut VerificationReport, points: usize| {
        let opts = GeometrySuiteOptions {
            points_per_config: points,
            seed,
            fd_step,
            relax_to: None,
        };
        merge_suite(report, "geometry", geometry_suite(&criterion5_configs(), &opts));
        merge_suite(report, "product", product_suite(seed));
    };
    let run_bb = |report: &mut VerificationReport, range: (u32, u32)| {
        merge_suite(report, "bb", bb_suite(range.0, range.1, seed, fd_step));
    };

    match config.command {
        Command::Identities => {
            run_identities(&mut report, config.resolved_m_range([1, 8]));
        }
        Command::Septuple => {
            let range = config.resolved_m_range([2, 4]);
            run_septuple(&mut report, range, config.sample_count.unwrap_or(25));
        }
        Command::Ode => {
            merge_suite(&mut report, "ode", ode_suite(ode_step));
        }
        Command::Geometry => match &config.case {
            Some(block) => match geometry_config_from_block(block, config.sample_count) {
                Ok((geometry_config, points)) => {
                    let opts = GeometrySuiteOptions {
                        points_per_config: points,
                        seed,
                        fd_step,
                        relax_to: None,
                    };
                    merge_suite(
                        &mut report,
                        "geometry",
                        geometry_suite(&[geometry_config], &opts),
                    );
                }
                Err(message) => {
                    report.push_exact("driver", "(suite-error)", false, Some(message));
                }
            },
            None => {
                run_geometry_batch(&mut report, config.sample_count.unwrap_or(20));
            }
        },
        Command::Bb => {
            run_bb(&mut report, config.resolved_m_range([2, 6]));
        }
        Command::All => {
            run_identities(&mut report, config.resolved_m_range([1, 8]));
            run_septuple(
                &mut report,
                config.resolved_m_range([2, 4]),
                config.sample_count.unwrap_or(25),
            );
            merge_suite(&mut report, "ode", ode_suite(ODE_REFERENCE_STEP));
            run_geometry_batch(&mut report, config.sample_count.unwrap_or(20));
            run_bb(&mut report, config.resolved_m_range([2, 6]));
            merge_suite(
                &mut report,
                "dim3",
                dim3_suite(config.sample_count.unwrap_or(20).min(8), seed, fd_step),
            );
        }
    }

    apply_tolerance_overrides(&mut report, &config.tolerances);
    Ok(RunReport::new(config.clone(), report))
}

/// Renders a report in the requested format (JSON document or CSV with
/// one row per entry); all numbers keep full round-trip precision.
pub fn render_report(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut text =
                serde_json::to_string_pretty(report).expect("report serialization is total");
            text.push('\n');
            text
        }
        ReportFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(["tag", "equation", "residual", "tolerance", "pass"])
                .expect("in-memory write");
            for entry in &report.entries {
                writer
                    .write_record([
                        entry.tag.as_str(),
                        entry.equation.as_str(),
                        &entry.residual.to_string(),
                        &entry.tolerance.to_string(),
                        &entry.pass.to_string(),
                    ])
                    .expect("in-memory write");
            }
            String::from_utf8(writer.into_inner().expect("in-memory flush"))
                .expect("csv output is UTF-8")
        }
    }
}

/// Writes the rendered report to the path (standard output when the
/// path is `None` or `"-"`).
///
/// # Errors
///
/// [`ConfigError::Io`] when the destination cannot be written.
pub fn emit_report(
    report: &RunReport,
    format: ReportFormat,
    path: Option<&str>,
) -> Result<(), ConfigError> {
    let text = render_report(report, format);
    match path {
        None | Some("-") => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| ConfigError::Io(e.to_string())),
        Some(path) => std::fs::write(path, text)
            .map_err(|e| ConfigError::Io(format!("writing {path}: {e}"))),
    }
}

/// The process exit code for a finished run: 0 when every entry passed,
/// 1 otherwise.
pub fn exit_code(report: &RunReport) -> i32 {
    if report.overall {
        0
    } else {
        1
    }
}

/// A tabulated septuple: CSV text plus the number of grid rows that hit
/// a pole (the process must exit nonzero if any did).
#[derive(Debug, Clone, PartialEq)]
pub struct TableOutcome {
    pub csv: String,
    pub pole_rows: usize,
}

/// Tabulates the seven closed-form functions of a family member on an
/// exact rational grid over [lo, hi] with `points` rows (endpoints
/// included; a single-point grid sits at lo). Values are computed in
/// exact arithmetic and rendered as shortest round-trip decimals; rows
/// whose τ lies on a pole carry the marker `pole` in every value
/// column.
///
/// # Errors
///
/// [`ConfigError::Invalid`] for an empty grid, a reversed interval, or
/// parameters the family itself rejects.
pub fn table_dump(
    params: &CaseParams,
    lo: &Rational,
    hi: &Rational,
    points: usize,
) -> Result<TableOutcome, ConfigError> {
    if points == 0 {
        return Err(ConfigError::Invalid("a table needs at least one row".into()));
    }
    if lo > hi {
        return Err(ConfigError::Invalid(format!(
            "need lo <= hi, got [{}, {}]",
            crate::exact::format_rational(lo),
            crate::exact::format_rational(hi)
        )));
    }
    let fns = params
        .build()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["tau", "Q", "Y", "s", "phi", "psi", "lambda", "mu"])
        .expect("in-memory write");
    let mut pole_rows = 0usize;
    for k in 0..points {
        let tau = if points == 1 {
            lo.clone()
        } else {
            lo + (hi - lo) * Rational::new(k.into(), (points - 1).into())
        };
        let tau_text = rational_to_f64(&tau).to_string();
        match fns.eval(&tau) {
            Ok(values) => {
                let mut row = vec![tau_text];
                row.extend(values.iter().map(|v| rational_to_f64(v).to_string()));
                writer.write_record(&row).expect("in-memory write");
            }
            Err(ExactError::PoleEvaluation(_)) => {
                pole_rows += 1;
                let mut row = vec![tau_text];
                row.extend(std::iter::repeat("pole".to_string()).take(7));
                writer.write_record(&row).expect("in-memory write");
            }
            Err(other) => {
                return Err(ConfigError::Invalid(other.to_string()));
            }
        }
    }
    let csv = String::from_utf8(writer.into_inner().expect("in-memory flush"))
        .expect("csv output is UTF-8");
    Ok(TableOutcome { csv, pole_rows })
}
