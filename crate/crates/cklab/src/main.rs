//! Command-line batch driver.
//!
//! Subcommands mirror the run commands (`identities`, `septuple`,
//! `ode`, `geometry`, `bb`, `all`) plus `table` for exact tabulation;
//! alternatively `--config FILE` loads a single JSON document with the
//! same content as the flags. Reports go to standard output or
//! `--output PATH` as JSON or CSV.
//!
//! Exit codes: 0 when every report entry passes, 1 when any entry fails
//! (or the report cannot be written), 2 for usage or configuration
//! errors (nothing runs).
//!
//! `CKLAB_WORKERS` caps the worker-pool size; it affects speed only,
//! never results.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cklab::config::{
    emit_report, execute, exit_code, table_dump, CaseBlock, CaseLabel, Command, ConfigError,
    ReportFormat, RunConfig, TableOutcome,
};
use cklab::exact::{parse_rational, Rational};

#[derive(Parser)]
#[command(
    name = "cklab",
    version,
    about = "Verification laboratory for conformally-Einstein Kähler metrics",
    arg_required_else_help = true
)]
struct Cli {
    /// Load the run from a JSON config document instead of flags.
    #[arg(long, value_name = "FILE")]
    config: Option<String>,
    /// Report destination (standard output when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<String>,
    /// Report format.
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// Seed for every pseudo-random draw (recorded in the report).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Finite-difference step (geometry) or integration step (ode).
    #[arg(long = "fd-step", global = true, allow_negative_numbers = true)]
    fd_step: Option<f64>,
    /// Tolerance override TAG=VALUE (repeatable); applies to every
    /// numeric entry whose tag or equation label contains TAG.
    #[arg(long = "tolerance", global = true, value_name = "TAG=VALUE")]
    tolerance: Vec<String>,
    #[command(subcommand)]
    command: Option<CliCommand>,
}

/// Family parameter flags shared by `geometry` and `table`.
#[derive(Debug, clap::Args)]
struct FamilyArgs {
    /// Family selector: i, ii, or iii.
    #[arg(long)]
    case: Option<String>,
    /// Complex dimension parameter m.
    #[arg(long)]
    m: Option<u32>,
    /// Family i/ii constant K (integer, p/q, or decimal).
    #[arg(long = "K", allow_hyphen_values = true)]
    k: Option<String>,
    /// Family i/ii coefficient α.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Family i/ii constant η.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Family iii coefficient A.
    #[arg(long = "A", allow_hyphen_values = true)]
    coef_a: Option<String>,
    /// Family iii coefficient B.
    #[arg(long = "B", allow_hyphen_values = true)]
    coef_b: Option<String>,
    /// Family iii coefficient C.
    #[arg(long = "C", allow_hyphen_values = true)]
    coef_c: Option<String>,
    /// Family iii affine offset c (nonzero).
    #[arg(long = "c", allow_hyphen_values = true)]
    c: Option<String>,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Exact special-function identity web over an m-range.
    Identities {
        /// Dimension range, e.g. 1..8 or a single value.
        #[arg(long, default_value = "1..8")]
        m: String,
    },
    /// Seeded family draws through the exact system and integral
    /// checks, plus the third-order equation basis.
    Septuple {
        #[arg(long, default_value = "2..4")]
        m: String,
        /// Random parameter draws per family and dimension.
        #[arg(long)]
        draws: Option<usize>,
    },
    /// Runge–Kutta cross-checks of the three families.
    Ode {
        /// Integration step (default 1e-3).
        #[arg(long)]
        step: Option<f64>,
    },
    /// Assembled-chart certification: the reference batch, or one
    /// configuration described by the family flags.
    Geometry {
        #[command(flatten)]
        family: FamilyArgs,
        /// Orientation sign: +1, 0 (family i only), or -1.
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        /// Fiber coupling constant (nonzero).
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Chart points sampled per configuration.
        #[arg(long)]
        points: Option<usize>,
        /// Lower end of the working τ-interval (searched when omitted).
        #[arg(long = "tau-lo", allow_hyphen_values = true)]
        tau_lo: Option<f64>,
        /// Upper end of the working τ-interval.
        #[arg(long = "tau-hi", allow_hyphen_values = true)]
        tau_hi: Option<f64>,
    },
    /// The distinguished-configuration identity and its assembled
    /// chart.
    Bb {
        #[arg(long, default_value = "2..6")]
        m: String,
    },
    /// Every suite, short-circuiting disabled.
    All {
        /// Chart points per geometry configuration.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Tabulate a family member's seven functions on an exact grid.
    Table {
        #[command(flatten)]
        family: FamilyArgs,
        /// Grid start (integer, p/q, or decimal; exact).
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Grid end (exact).
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Number of grid rows (endpoints included).
        #[arg(long, default_value_t = 11)]
        points: usize,
    },
}

fn main() -> ExitCode {
    init_workers();
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("cklab: {error}");
            match error {
                ConfigError::Io(_) => ExitCode::from(1),
                ConfigError::Parse(_) | ConfigError::Invalid(_) => ExitCode::from(2),
            }
        }
    }
}

/// Applies `CKLAB_WORKERS` before any parallel work starts.
fn init_workers() {
    if let Ok(text) = std::env::var("CKLAB_WORKERS") {
        if let Ok(n) = text.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn real_main(cli: Cli) -> Result<ExitCode, ConfigError> {
    let overrides = parse_tolerance_overrides(&cli.tolerance)?;
    let format = match cli.format.as_deref() {
        Some("csv") => Some(ReportFormat::Csv),
        Some("json") => Some(ReportFormat::Json),
        Some(other) => {
            return Err(ConfigError::Invalid(format!(
                "format must be json or csv, got {other:?}"
            )))
        }
        None => None,
    };

    if let Some(path) = &cli.config {
        if cli.command.is_some() {
            return Err(ConfigError::Invalid(
                "--config and a subcommand are mutually exclusive".into(),
            ));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Parse(format!("reading {path}: {e}")))?;
        let mut config = RunConfig::from_json(&text)?;
        // Command-line output controls override the document's.
        if let Some(output) = cli.output {
            config.output_path = Some(output);
        }
        if let Some(format) = format {
            config.format = format;
        }
        if let Some(seed) = cli.seed {
            config.seed = seed;
        }
        if let Some(fd_step) = cli.fd_step {
            config.fd_step = Some(fd_step);
        }
        config.tolerances.extend(overrides);
        config.validate()?;
        return run_and_emit(&config);
    }

    let Some(command) = cli.command else {
        return Err(ConfigError::Invalid(
            "a subcommand or --config is required".into(),
        ));
    };

    let mut config = RunConfig {
        command: Command::All,
        m_range: None,
        case: None,
        tolerances: overrides,
        sample_count: None,
        seed: cli.seed.unwrap_or(0),
        fd_step: cli.fd_step,
        output_path: cli.output,
        format: format.unwrap_or_default(),
    };

    match command {
        CliCommand::Identities { m } => {
            config.command = Command::Identities;
            config.m_range = Some(parse_m_range(&m)?);
        }
        CliCommand::Septuple { m, draws } => {
            config.command = Command::Septuple;
            config.m_range = Some(parse_m_range(&m)?);
            config.sample_count = draws;
        }
        CliCommand::Ode { step } => {
            config.command = Command::Ode;
            if let Some(step) = step {
                config.fd_step = Some(step);
            }
        }
        CliCommand::Geometry {
            family,
            eps,
            a,
            points,
            tau_lo,
            tau_hi,
        } => {
            config.command = Command::Geometry;
            config.sample_count = points;
            match family.case {
                Some(_) => {
                    config.case = Some(family_block(family, eps, a, tau_lo, tau_hi)?);
                }
                None => {
                    let stray = family.m.is_some()
                        || family.k.is_some()
                        || family.alpha.is_some()
                        || family.eta.is_some()
                        || family.coef_a.is_some()
                        || family.coef_b.is_some()
                        || family.coef_c.is_some()
                        || family.c.is_some()
                        || eps.is_some()
                        || a.is_some()
                        || tau_lo.is_some()
                        || tau_hi.is_some();
                    if stray {
                        return Err(ConfigError::Invalid(
                            "family flags need --case (omit them all for the reference batch)"
                                .into(),
                        ));
                    }
                }
            }
        }
        CliCommand::Bb { m } => {
            config.command = Command::Bb;
            config.m_range = Some(parse_m_range(&m)?);
        }
        CliCommand::All { points } => {
            config.command = Command::All;
            config.sample_count = points;
        }
        CliCommand::Table {
            family,
            from,
            to,
            points,
        } => {
            return run_table(family, &from, &to, points, config.output_path.as_deref());
        }
    }

    config.validate()?;
    run_and_emit(&config)
}

fn run_and_emit(config: &RunConfig) -> Result<ExitCode, ConfigError> {
    let report = execute(config)?;
    emit_report(&report, config.format, config.output_path.as_deref())?;
    if let Some(path) = &config.output_path {
        let verdict = if report.overall { "pass" } else { "FAIL" };
        eprintln!(
            "cklab: {} entries, overall {verdict}, report written to {path}",
            report.entries.len()
        );
    }
    Ok(ExitCode::from(exit_code(&report) as u8))
}

fn parse_tolerance_overrides(raw: &[String]) -> Result<BTreeMap<String, f64>, ConfigError> {
    let mut out = BTreeMap::new();
    for item in raw {
        let (tag, value) = item.split_once('=').ok_or_else(|| {
            ConfigError::Invalid(format!("tolerance override must be TAG=VALUE, got {item:?}"))
        })?;
        let value: f64 = value.parse().map_err(|_| {
            ConfigError::Invalid(format!("tolerance value in {item:?} is not a number"))
        })?;
        out.insert(tag.to_string(), value);
    }
    Ok(out)
}

/// Parses `lo..hi` or a single value into an m-range.
fn parse_m_range(text: &str) -> Result<[u32; 2], ConfigError> {
    let bad = || ConfigError::Invalid(format!("m must be N or LO..HI, got {text:?}"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        Ok([lo, hi])
    } else {
        let m: u32 = text.trim().parse().map_err(|_| bad())?;
        Ok([m, m])
    }
}

fn parse_case_label(text: &str) -> Result<CaseLabel, ConfigError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "i" | "1" => Ok(CaseLabel::I),
        "ii" | "2" => Ok(CaseLabel::II),
        "iii" | "3" => Ok(CaseLabel::III),
        other => Err(ConfigError::Invalid(format!(
            "case must be i, ii, or iii, got {other:?}"
        ))),
    }
}

fn family_block(
    family: FamilyArgs,
    eps: Option<String>,
    a: Option<f64>,
    tau_lo: Option<f64>,
    tau_hi: Option<f64>,
) -> Result<CaseBlock, ConfigError> {
    let case = parse_case_label(family.case.as_deref().expect("checked by caller"))?;
    let m = family
        .m
        .ok_or_else(|| ConfigError::Invalid("--case needs --m".into()))?;
    Ok(CaseBlock {
        case,
        m,
        k: family.k,
        alpha: family.alpha,
        eta: family.eta,
        coef_a: family.coef_a,
        coef_b: family.coef_b,
        coef_c: family.coef_c,
        c: family.c,
        eps,
        a,
        tau_lo,
        tau_hi,
    })
}

fn run_table(
    family: FamilyArgs,
    from: &str,
    to: &str,
    points: usize,
    output: Option<&str>,
) -> Result<ExitCode, ConfigError> {
    let case = parse_case_label(
        family
            .case
            .as_deref()
            .ok_or_else(|| ConfigError::Invalid("table needs --case".into()))?,
    )?;
    let m = family
        .m
        .ok_or_else(|| ConfigError::Invalid("table needs --m".into()))?;
    if !(1..=16).contains(&m) {
        return Err(ConfigError::Invalid(format!(
            "m must lie in [1, 16], got {m}"
        )));
    }
    let parse = |name: &str, text: &str| -> Result<Rational, ConfigError> {
        parse_rational(text).ok_or_else(|| {
            ConfigError::Invalid(format!(
                "{name} must be an integer, p/q, or decimal string, got {text:?}"
            ))
        })
    };
    for (name, value) in [
        ("K", &family.k),
        ("alpha", &family.alpha),
        ("eta", &family.eta),
        ("A", &family.coef_a),
        ("B", &family.coef_b),
        ("C", &family.coef_c),
        ("c", &family.c),
    ] {
        if let Some(text) = value {
            parse(name, text)?;
        }
    }
    if case == CaseLabel::III && family.c.is_none() {
        return Err(ConfigError::Invalid(
            "family iii needs a nonzero affine offset c".into(),
        ));
    }
    let block = CaseBlock {
        case,
        m,
        k: family.k,
        alpha: family.alpha,
        eta: family.eta,
        coef_a: family.coef_a,
        coef_b: family.coef_b,
        coef_c: family.coef_c,
        c: family.c,
        eps: None,
        a: None,
        tau_lo: None,
        tau_hi: None,
    };
    let lo = parse("from", from)?;
    let hi = parse("to", to)?;
    let TableOutcome { csv, pole_rows } = table_dump(&block.to_case_params(), &lo, &hi, points)?;
    match output {
        None | Some("-") => print!("{csv}"),
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| ConfigError::Io(format!("writing {path}: {e}")))?;
        }
    }
    if pole_rows > 0 {
        eprintln!("cklab: {pole_rows} grid row(s) hit a pole");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::from(0))
}
