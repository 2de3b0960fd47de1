//! Command-line front end: argument parsing, dispatch and exit codes.

pub mod ingest;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use tversky_core::simulation::{
    bootstrap, histogram_summary, run_simulation, ScoreModel, SimulationConfig,
};
use tversky_core::{
    bound_table, confidence_interval, confidence_interval_from_counts, precision, recall,
    required_events, required_total, tversky_index, ConfusionCounts, ErrorCategory, SummaryStats64,
    TverskyParams64,
};

use crate::ingest::{ingest, IngestError, InputFormat};
use crate::report::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Core(#[from] tversky_core::Error),
    #[error("cannot serialize report: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl CliError {
    /// 1 usage, 2 data or parse, 3 degenerate sample, 4 numeric domain.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Ingest(IngestError::InvalidThreshold(_)) => 4,
            CliError::Ingest(_) | CliError::Serialize(_) => 2,
            CliError::Core(e) => match e.category() {
                ErrorCategory::Data => 2,
                ErrorCategory::Degenerate => 3,
                ErrorCategory::Domain => 4,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormatArg {
    Auto,
    Csv,
    Jsonl,
}

#[derive(Debug, Parser)]
#[command(
    name = "tversky",
    version,
    about = "F-beta / Tversky index estimates with analytic standard errors"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point estimate, precision and recall.
    Estimate(DataCmd),
    /// Point estimate with standard error and confidence interval.
    Ci(CiCmd),
    /// Conservative sample size for a target standard error.
    Plan(PlanCmd),
    /// Table of the variance bound V(max(a,b)) for max(a,b) = 0.5 .. 0.9.
    BoundTable,
    /// Monte Carlo coverage experiment under a Gaussian score model.
    Simulate(SimulateCmd),
    /// Compare the analytic standard error with a bootstrap estimate.
    BootstrapCheck(BootstrapCmd),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DataSource {
    /// Records file: CSV with header `z,a` or `z,score`, or JSON lines.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// Inline confusion counts.
    #[arg(long, value_name = "N11,N10,N01,N00")]
    pub counts: Option<String>,

    /// Inline summary statistics.
    #[arg(long, value_name = "N,MEAN_ZA,TAU_AB,TAU_A2B2")]
    pub summary: Option<String>,
}

#[derive(Debug, Args)]
pub struct InputOpts {
    /// Score threshold t for score-mode records (a = score > t).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub threshold: f64,

    /// Records file format; `auto` picks JSON lines for .jsonl/.ndjson.
    #[arg(long, value_enum, default_value_t = InputFormatArg::Auto)]
    pub input_format: InputFormatArg,
}

#[derive(Debug, Args)]
pub struct ParamOpts {
    /// F-beta importance parameter (default 1 when --ab is absent).
    #[arg(long, conflicts_with = "ab")]
    pub beta: Option<f64>,

    /// Explicit Tversky weights on false positives and false negatives.
    #[arg(long, value_name = "A,B")]
    pub ab: Option<String>,
}

#[derive(Debug, Args)]
pub struct DataCmd {
    #[command(flatten)]
    pub source: DataSource,
    #[command(flatten)]
    pub input: InputOpts,
    #[command(flatten)]
    pub params: ParamOpts,
}

#[derive(Debug, Args)]
pub struct CiCmd {
    #[command(flatten)]
    pub data: DataCmd,
    /// Confidence level.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
}

#[derive(Debug, Args)]
pub struct PlanCmd {
    #[command(flatten)]
    pub params: ParamOpts,
    /// Target standard error.
    #[arg(long)]
    pub delta: f64,
    /// Anticipated prevalence P(Z = 1); adds the overall sample size.
    #[arg(long)]
    pub ez: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateCmd {
    #[command(flatten)]
    pub params: ParamOpts,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// P(Z = 1).
    #[arg(long, default_value_t = 0.5)]
    pub pz: f64,
    /// Score shift for Z = 1: S | Z ~ N(mu·Z, 1).
    #[arg(long, default_value_t = 2.5, allow_negative_numbers = true)]
    pub mu: f64,
    /// Prediction threshold: A = S > threshold.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub threshold: f64,
    /// Records per replication.
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[arg(long, default_value_t = 10_000)]
    pub replications: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Histogram bins for the exported estimate distribution.
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
}

#[derive(Debug, Args)]
pub struct BootstrapCmd {
    #[command(flatten)]
    pub data: DataCmd,
    #[arg(long, default_value_t = 100_000)]
    pub resamples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// A report plus messages for stderr.
pub struct Outcome {
    pub report: Report,
    pub warnings: Vec<String>,
}

fn split_fields(text: &str, expected: usize, flag: &str) -> Result<Vec<String>, CliError> {
    let fields: Vec<String> = text.split(',').map(|f| f.trim().to_string()).collect();
    if fields.len() != expected {
        return Err(CliError::Usage(format!(
            "--{flag} expects {expected} comma-separated values, got {:?}",
            text
        )));
    }
    Ok(fields)
}

fn parse_field<T: std::str::FromStr>(field: &str, flag: &str) -> Result<T, CliError> {
    field
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: cannot parse {field:?}")))
}

fn parse_counts(text: &str) -> Result<ConfusionCounts, CliError> {
    let f = split_fields(text, 4, "counts")?;
    let cell = |i: usize| parse_field::<u64>(&f[i], "counts");
    Ok(ConfusionCounts::new(
        cell(0)?,
        cell(1)?,
        cell(2)?,
        cell(3)?,
    )?)
}

fn parse_summary(text: &str) -> Result<SummaryStats64, CliError> {
    let f = split_fields(text, 4, "summary")?;
    let n = parse_field::<u64>(&f[0], "summary")?;
    let x = |i: usize| parse_field::<f64>(&f[i], "summary");
    Ok(SummaryStats64::new(n, x(1)?, x(2)?, x(3)?)?)
}

fn resolve_params(opts: &ParamOpts) -> Result<(TverskyParams64, ParamsOut), CliError> {
    match (&opts.ab, opts.beta) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--beta and --ab are mutually exclusive".into(),
        )),
        (Some(ab), None) => {
            let f = split_fields(ab, 2, "ab")?;
            let params =
                TverskyParams64::new(parse_field(&f[0], "ab")?, parse_field(&f[1], "ab")?)?;
            Ok((params, ParamsOut::new(&params, None)))
        }
        (None, beta) => {
            let beta = beta.unwrap_or(1.0);
            let params = TverskyParams64::from_beta(beta)?;
            Ok((params, ParamsOut::new(&params, Some(beta))))
        }
    }
}

enum Data {
    Counts(ConfusionCounts, Source),
    Summary(SummaryStats64),
}

fn load_data(cmd: &DataCmd) -> Result<Data, CliError> {
    if let Some(path) = &cmd.source.input {
        let format = match cmd.input.input_format {
            InputFormatArg::Auto => None,
            InputFormatArg::Csv => Some(InputFormat::Csv),
            InputFormatArg::Jsonl => Some(InputFormat::JsonLines),
        };
        let ingested = ingest(path, format, cmd.input.threshold)?;
        return Ok(Data::Counts(ingested.counts, Source::Records));
    }
    if let Some(text) = &cmd.source.counts {
        return Ok(Data::Counts(parse_counts(text)?, Source::Counts));
    }
    if let Some(text) = &cmd.source.summary {
        return Ok(Data::Summary(parse_summary(text)?));
    }
    Err(CliError::Usage(
        "one of --input, --counts or --summary is required".into(),
    ))
}

fn estimate(cmd: &DataCmd) -> Result<Outcome, CliError> {
    let (params, params_out) = resolve_params(&cmd.params)?;
    let report = match load_data(cmd)? {
        Data::Counts(counts, source) => EstimateOut {
            command: "estimate",
            source,
            params: params_out,
            n: counts.n(),
            counts: Some(counts),
            tau: tversky_index(&counts, &params)?,
            precision: Some(precision(&counts)?),
            recall: Some(recall(&counts)?),
        },
        Data::Summary(stats) => EstimateOut {
            command: "estimate",
            source: Source::Summary,
            params: params_out,
            n: stats.n,
            counts: None,
            tau: stats.tau_ab,
            precision: None,
            recall: None,
        },
    };
    Ok(Outcome {
        report: Report::Estimate(report),
        warnings: Vec::new(),
    })
}

fn ci(cmd: &CiCmd) -> Result<Outcome, CliError> {
    let (params, params_out) = resolve_params(&cmd.data.params)?;
    let (est, counts, source, prec, rec) = match load_data(&cmd.data)? {
        Data::Counts(counts, source) => (
            confidence_interval_from_counts(&counts, &params, cmd.level)?,
            Some(counts),
            source,
            Some(precision(&counts)?),
            Some(recall(&counts)?),
        ),
        Data::Summary(stats) => (
            confidence_interval(&stats, &params, cmd.level)?,
            None,
            Source::Summary,
            None,
            None,
        ),
    };
    let mut warnings = Vec::new();
    if est.boundary {
        warnings.push(
            "index estimate is 1: the interval has zero width and the normal approximation is vacuous"
                .to_string(),
        );
    }
    Ok(Outcome {
        report: Report::Ci(CiOut {
            command: "ci",
            source,
            params: params_out,
            n: est.n,
            counts,
            tau: est.tau,
            precision: prec,
            recall: rec,
            nu: est.nu,
            se: est.se,
            level: est.level,
            z: est.z,
            half_width: est.half_width,
            ci_lower: est.ci_lower,
            ci_upper: est.ci_upper,
            boundary: est.boundary,
        }),
        warnings,
    })
}

fn plan(cmd: &PlanCmd) -> Result<Outcome, CliError> {
    let (params, params_out) = resolve_params(&cmd.params)?;
    let plan = match cmd.ez {
        Some(ez) => required_total(cmd.delta, &params, ez)?,
        None => required_events(cmd.delta, &params)?,
    };
    Ok(Outcome {
        report: Report::Plan(PlanOut {
            command: "plan",
            params: params_out,
            delta: plan.delta,
            ez: plan.ez,
            v_exact: plan.v_exact,
            v_planning: plan.v_planning,
            required_events: plan.required_events,
            required_total: plan.required_total,
        }),
        warnings: Vec::new(),
    })
}

fn bound_table_cmd() -> Outcome {
    Outcome {
        report: Report::BoundTable(BoundTableOut {
            command: "bound-table",
            rows: bound_table::<f64>().iter().map(BoundRow::from).collect(),
        }),
        warnings: Vec::new(),
    }
}

fn simulate(cmd: &SimulateCmd) -> Result<Outcome, CliError> {
    let (params, params_out) = resolve_params(&cmd.params)?;
    let config = SimulationConfig {
        model: ScoreModel::new(cmd.pz, cmd.mu, cmd.threshold)?,
        n: cmd.n,
        replications: cmd.replications,
        params,
        level: cmd.level,
        seed: cmd.seed,
    };
    let report = run_simulation(&config)?;
    let histogram = histogram_summary(&report.estimates, cmd.bins)?;
    let mut warnings = Vec::new();
    if report.degenerate_count > 0 {
        warnings.push(format!(
            "{} of {} replications had no true positives and were excluded",
            report.degenerate_count, cmd.replications
        ));
    }
    Ok(Outcome {
        report: Report::Simulate(SimulateOut {
            command: "simulate",
            config: SimulationSetup {
                model: config.model,
                params: params_out,
                n: config.n,
                replications: config.replications,
                level: config.level,
                seed: config.seed,
            },
            report,
            histogram,
        }),
        warnings,
    })
}

fn bootstrap_check(cmd: &BootstrapCmd) -> Result<Outcome, CliError> {
    let (params, params_out) = resolve_params(&cmd.data.params)?;
    let counts = match load_data(&cmd.data)? {
        Data::Counts(counts, _) => counts,
        Data::Summary(_) => {
            return Err(CliError::Usage(
                "bootstrap-check needs records or counts, not --summary".into(),
            ))
        }
    };
    let analytic = confidence_interval_from_counts(&counts, &params, 0.95)?;
    let boot = bootstrap(&counts, &params, cmd.resamples, cmd.seed)?;
    let mut warnings = Vec::new();
    if boot.skipped > 0 {
        warnings.push(format!(
            "{} of {} resamples had no true positives and were skipped",
            boot.skipped, boot.resamples
        ));
    }
    let relative_gap = if boot.se > 0.0 {
        analytic.se / boot.se - 1.0
    } else {
        0.0
    };
    Ok(Outcome {
        report: Report::BootstrapCheck(BootstrapCheckOut {
            command: "bootstrap-check",
            params: params_out,
            n: counts.n(),
            counts,
            tau: analytic.tau,
            analytic_se: analytic.se,
            bootstrap_se: boot.se,
            relative_gap,
            resamples: boot.resamples,
            skipped: boot.skipped,
            seed: cmd.seed,
        }),
        warnings,
    })
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Estimate(cmd) => estimate(cmd),
        Command::Ci(cmd) => ci(cmd),
        Command::Plan(cmd) => plan(cmd),
        Command::BoundTable => Ok(bound_table_cmd()),
        Command::Simulate(cmd) => simulate(cmd),
        Command::BootstrapCheck(cmd) => bootstrap_check(cmd),
    }
}

/// Parses `args`, runs the command, prints the report to stdout and
/// warnings and errors to stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = execute(&cli).and_then(|o| {
        let text = match cli.format {
            Format::Text => o.report.to_text(),
            Format::Json => o.report.to_json()? + "\n",
        };
        Ok((text, o.warnings))
    });
    match outcome {
        Ok((text, warnings)) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
