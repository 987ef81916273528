//! Command-line front end for the `gmprod` binary.
//!
//! ```text
//! gmprod <moments|distinguish|sweep|oracle> --p P --q Q --inner d1,d2,...
//!        --trials N --seed S [--constants k=v,...] [--format json|csv]
//!        [--out PATH] [--strict-dims]
//! ```
//!
//! Exit status: 0 on success, 2 for invalid arguments, 3 when the exact oracle
//! refuses a size, 1 for I/O failures. `GMPROD_SEED` supplies the seed when
//! `--seed` is absent.
//!
//! JSON reports are objects with a fixed key order (see the `*_report`
//! functions); exact rationals are strings such as `"21/2"`. CSV output has a
//! header row, LF line endings and reals in scientific notation with 17
//! significant digits.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use crate::chain::{ChainSpec, Validation};
use crate::distinguisher::{
    build_test_with, geometric_dims, power_from_samples, sample_statistics, sweep,
    tv_lower_bound_empirical, tv_upper_bound, SweepConfig, SweepRow,
};
use crate::error::Error;
use crate::moments::{
    closed_form_moments, mean_h_asymptotic, mean_h_product, mean_h_product_exact,
    mean_h_single, variance_bound_product, variance_single_exact, BoundConstants,
};
use crate::oracle::{wick_exact_mean_h, wick_exact_var_h_single, WickBudget};
use crate::sampling::SeedSpec;

pub const DEFAULT_SEED: u64 = 2024;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ORACLE_BUDGET: i32 = 3;

/// Column order of `sweep` CSV output.
pub const SWEEP_HEADER: [&str; 6] = [
    "d",
    "accuracy",
    "tv_lower_empirical",
    "tv_upper_c1",
    "chebyshev_error",
    "mean_gap",
];

#[derive(Debug, Parser)]
#[command(name = "gmprod", version, about = "Gaussian matrix products vs. a single Gaussian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact and asymptotic moments of h for both ensembles.
    Moments(CommonArgs),
    /// Empirical accuracy of the threshold test.
    Distinguish(CommonArgs),
    /// Accuracy and TV bounds over a geometric range of inner dimensions.
    Sweep(SweepArgs),
    /// Exact Wick-enumeration values next to the closed forms.
    Oracle(CommonArgs),
}

#[derive(Debug, Clone, Args)]
struct CommonArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// Comma-separated inner dimensions d1,...,d_{r-1}; empty for a single factor.
    #[arg(long, value_parser = parse_inner, default_value = "")]
    inner: InnerDims,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Args)]
struct SweepArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// Number of factors; every inner dimension is set to the swept d.
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 16)]
    d_min: usize,
    #[arg(long, default_value_t = 4096)]
    d_max: usize,
    #[arg(long, default_value_t = 9)]
    steps: usize,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    #[arg(long, default_value_t = 400)]
    trials: usize,
    #[arg(long, env = "GMPROD_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Constants as k=v pairs: c, c1, c2, c3, c4, kappa_p, kappa_q (all default 1).
    #[arg(long, value_parser = parse_constants, default_value = "")]
    constants: Constants,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Require every inner dimension to be at least max(p, q).
    #[arg(long)]
    strict_dims: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct InnerDims(Vec<usize>);

fn parse_inner(s: &str) -> Result<InnerDims, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(InnerDims(Vec::new()));
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| format!("malformed inner dimension {tok:?}"))
        })
        .collect::<Result<_, _>>()
        .map(InnerDims)
}

/// Named constants. `c` scales the TV upper bound; the rest feed the
/// variance-bound recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c: f64,
    pub bound: BoundConstants,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c: 1.0,
            bound: BoundConstants::default(),
        }
    }
}

fn parse_constants(s: &str) -> Result<Constants, String> {
    let mut out = Constants::default();
    for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("expected k=v, got {pair:?}"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("constant {key:?} is not a number"))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("constant {key:?} must be positive, got {value}"));
        }
        let slot = match key.trim() {
            "c" => &mut out.c,
            "c1" => &mut out.bound.c1,
            "c2" => &mut out.bound.c2,
            "c3" => &mut out.bound.c3,
            "c4" => &mut out.bound.c4,
            "kappa_p" => &mut out.bound.kappa_p,
            "kappa_q" => &mut out.bound.kappa_q,
            other => return Err(format!("unknown constant {other:?}")),
        };
        *slot = value;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Moments,
    Distinguish,
    Sweep,
    Oracle,
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: CommandKind,
    pub p: usize,
    pub q: usize,
    pub inner: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub constants: Constants,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub strict_dims: bool,
    pub sweep: Option<SweepRange>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepRange {
    pub r: usize,
    pub d_min: usize,
    pub d_max: usize,
    pub steps: usize,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Self {
        let (subcommand, p, q, inner, run, sweep) = match cli.command {
            Command::Moments(a) => (CommandKind::Moments, a.p, a.q, a.inner.0, a.run, None),
            Command::Distinguish(a) => (CommandKind::Distinguish, a.p, a.q, a.inner.0, a.run, None),
            Command::Oracle(a) => (CommandKind::Oracle, a.p, a.q, a.inner.0, a.run, None),
            Command::Sweep(a) => (
                CommandKind::Sweep,
                a.p,
                a.q,
                Vec::new(),
                a.run,
                Some(SweepRange {
                    r: a.r,
                    d_min: a.d_min,
                    d_max: a.d_max,
                    steps: a.steps,
                }),
            ),
        };
        Self {
            subcommand,
            p,
            q,
            inner,
            trials: run.trials,
            seed: run.seed,
            constants: run.constants,
            output_format: run.format,
            output_path: run.out,
            strict_dims: run.strict_dims,
            sweep,
        }
    }

    fn validation(&self) -> Validation {
        if self.strict_dims {
            Validation::Strict
        } else {
            Validation::Structural
        }
    }

    fn chain(&self) -> Result<ChainSpec, Error> {
        ChainSpec::with_validation(self.p, self.q, self.inner.clone(), self.validation())
    }
}

/// A finished report: either one record or a table of rows.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Record(Map<String, Value>),
    Table {
        meta: Map<String, Value>,
        header: Vec<&'static str>,
        rows: Vec<Vec<Value>>,
    },
}

impl Report {
    pub fn to_json(&self) -> Value {
        match self {
            Report::Record(m) => Value::Object(m.clone()),
            Report::Table { meta, header, rows } => {
                let mut m = meta.clone();
                let rows = rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            header
                                .iter()
                                .zip(row)
                                .map(|(k, v)| (k.to_string(), v.clone()))
                                .collect(),
                        )
                    })
                    .collect();
                m.insert("rows".into(), Value::Array(rows));
                Value::Object(m)
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let (header, rows): (Vec<String>, Vec<Vec<String>>) = match self {
            Report::Record(m) => (
                m.keys().cloned().collect(),
                vec![m.values().map(csv_cell).collect()],
            ),
            Report::Table { header, rows, .. } => (
                header.iter().map(|s| s.to_string()).collect(),
                rows.iter().map(|r| r.iter().map(csv_cell).collect()).collect(),
            ),
        };
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&header).expect("in-memory write");
        for row in rows {
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => canonical_json(&self.to_json()),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

/// The writer used for every JSON report: pretty-printed, keys in insertion
/// order, trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Real number with 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => u.to_string(),
            (None, Some(i), _) => i.to_string(),
            (_, _, Some(f)) => format_real(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

fn real(v: f64) -> Value {
    Value::from(v)
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn dims_value(inner: &[usize]) -> Value {
    Value::Array(inner.iter().map(|&d| Value::from(d as u64)).collect())
}

fn chain_fields(m: &mut Map<String, Value>, spec: &ChainSpec) {
    m.insert("p".into(), Value::from(spec.p() as u64));
    m.insert("q".into(), Value::from(spec.q() as u64));
    m.insert("inner".into(), dims_value(spec.inner()));
    m.insert("r".into(), Value::from(spec.r() as u64));
}

/// Report of the `moments` subcommand.
pub fn moments_report(config: &RunConfig) -> Result<Report, Error> {
    let spec = config.chain()?;
    let d1 = spec.d1().ok_or_else(|| {
        Error::InvalidArgument("moments needs at least one inner dimension".into())
    })?;
    let (p, q) = (spec.p(), spec.q());
    let exact = mean_h_product_exact(&spec);
    let var_raw = variance_single_exact::<BigInt>(p, q);
    let var_single = var_raw.to_f64().unwrap_or(f64::INFINITY) / (d1 as f64).powi(4);
    let s = closed_form_moments::<BigInt>(spec.inner());

    let mut m = Map::new();
    chain_fields(&mut m, &spec);
    m.insert("mean_product".into(), real(mean_h_product(&spec)));
    m.insert("mean_product_exact".into(), Value::from(rational_string(&exact)));
    m.insert("mean_asymptotic".into(), real(mean_h_asymptotic(&spec)?));
    m.insert("mean_single".into(), real(mean_h_single(p, q, d1)));
    m.insert("mean_gap".into(), real(mean_h_product(&spec) - mean_h_single(p, q, d1)));
    m.insert("var_single_unnormalized".into(), Value::from(var_raw.to_string()));
    m.insert("var_single".into(), real(var_single));
    m.insert(
        "variance_bound_product".into(),
        real(variance_bound_product(&spec, config.constants.bound)?),
    );
    for (name, value) in ["s1", "s2", "s3", "s4", "s5", "s6"].iter().zip(s.as_array()) {
        m.insert((*name).into(), Value::from(value.to_string()));
    }
    Ok(Report::Record(m))
}

/// Report of the `distinguish` subcommand.
pub fn distinguish_report(config: &RunConfig) -> Result<Report, Error> {
    if config.trials < 10 {
        return Err(Error::InvalidArgument(format!(
            "distinguish needs --trials >= 10, got {}",
            config.trials
        )));
    }
    let spec = config.chain()?;
    let plan = build_test_with(&spec, config.constants.bound)?;
    let samples = sample_statistics(&spec, config.trials, SeedSpec::new(config.seed, 0))?;
    let power = power_from_samples(&plan, &samples)?;
    let tv_lower = tv_lower_bound_empirical(&samples.single, &samples.product)?;

    let mut m = Map::new();
    chain_fields(&mut m, &spec);
    m.insert("trials".into(), Value::from(config.trials as u64));
    m.insert("seed".into(), Value::from(config.seed));
    m.insert("mu_single".into(), real(plan.mu_single));
    m.insert("mu_product".into(), real(plan.mu_product));
    m.insert("threshold".into(), real(plan.threshold));
    m.insert("var_single".into(), real(plan.var_single));
    m.insert("var_product_bound".into(), real(plan.var_product_bound));
    m.insert("accuracy".into(), real(power.accuracy));
    m.insert("false_positive_rate".into(), real(power.false_positive_rate));
    m.insert("false_negative_rate".into(), real(power.false_negative_rate));
    m.insert("chebyshev_error".into(), real(power.chebyshev_error_bound));
    m.insert("tv_lower_empirical".into(), real(tv_lower));
    m.insert("tv_upper".into(), real(tv_upper_bound(&spec, config.constants.c)?));
    m.insert("c".into(), real(config.constants.c));
    Ok(Report::Record(m))
}

fn sweep_row_values(row: &SweepRow) -> Vec<Value> {
    vec![
        Value::from(row.d as u64),
        real(row.accuracy),
        real(row.tv_lower_empirical),
        real(row.tv_upper),
        real(row.chebyshev_error),
        real(row.mean_gap),
    ]
}

/// Report of the `sweep` subcommand.
pub fn sweep_report(config: &RunConfig) -> Result<Report, Error> {
    let range = config
        .sweep
        .ok_or_else(|| Error::InvalidArgument("sweep range missing".into()))?;
    let dims = geometric_dims(range.d_min, range.d_max, range.steps)?;
    if config.strict_dims && range.d_min < config.p.max(config.q) {
        return Err(Error::InvalidChain(format!(
            "strict mode: d_min = {} is below max(p, q) = {}",
            range.d_min,
            config.p.max(config.q)
        )));
    }
    let sweep_config = SweepConfig {
        p: config.p,
        q: config.q,
        r: range.r,
        trials: config.trials,
        seed: SeedSpec::new(config.seed, 0),
        tv_constant: config.constants.c,
        constants: config.constants.bound,
    };
    let rows = sweep(&sweep_config, &dims)?;

    let mut meta = Map::new();
    meta.insert("p".into(), Value::from(config.p as u64));
    meta.insert("q".into(), Value::from(config.q as u64));
    meta.insert("r".into(), Value::from(range.r as u64));
    meta.insert("d_min".into(), Value::from(range.d_min as u64));
    meta.insert("d_max".into(), Value::from(range.d_max as u64));
    meta.insert("steps".into(), Value::from(range.steps as u64));
    meta.insert("trials".into(), Value::from(config.trials as u64));
    meta.insert("seed".into(), Value::from(config.seed));
    meta.insert("c".into(), real(config.constants.c));
    Ok(Report::Table {
        meta,
        header: SWEEP_HEADER.to_vec(),
        rows: rows.iter().map(sweep_row_values).collect(),
    })
}

/// Report of the `oracle` subcommand.
pub fn oracle_report(config: &RunConfig) -> Result<Report, Error> {
    let spec = config.chain()?;
    let budget = WickBudget::default();
    let wick = wick_exact_mean_h(spec.p(), spec.q(), spec.inner(), budget)?;
    let closed = mean_h_product_exact(&spec);

    let mut m = Map::new();
    chain_fields(&mut m, &spec);
    m.insert("wick_mean".into(), Value::from(rational_string(&wick)));
    m.insert("closed_form_mean".into(), real(mean_h_product(&spec)));
    m.insert("closed_form_mean_exact".into(), Value::from(rational_string(&closed)));
    m.insert("equal".into(), Value::Bool(wick == closed));

    // Exact variance exists only for the single Gaussian; skip it when the
    // degree-8 expansion does not fit the budget.
    let variance = if spec.r() == 1 {
        wick_exact_var_h_single(spec.p(), spec.q(), budget).ok()
    } else {
        None
    };
    match variance {
        Some(wick_var) => {
            let formula = BigRational::from_integer(variance_single_exact::<BigInt>(spec.p(), spec.q()));
            m.insert("wick_variance".into(), Value::from(rational_string(&wick_var)));
            m.insert("closed_form_variance".into(), Value::from(rational_string(&formula)));
            m.insert("variance_equal".into(), Value::Bool(wick_var == formula));
        }
        None => {
            m.insert("wick_variance".into(), Value::Null);
            m.insert("closed_form_variance".into(), Value::Null);
            m.insert("variance_equal".into(), Value::Null);
        }
    }
    Ok(Report::Record(m))
}

/// Builds the report for a resolved configuration.
pub fn execute(config: &RunConfig) -> Result<Report, Error> {
    match config.subcommand {
        CommandKind::Moments => moments_report(config),
        CommandKind::Distinguish => distinguish_report(config),
        CommandKind::Sweep => sweep_report(config),
        CommandKind::Oracle => oracle_report(config),
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } | Error::OracleUnsupported(_) => EXIT_ORACLE_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Parses arguments into a [`RunConfig`]. Errors carry clap's message and exit code.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args).map(RunConfig::from_cli)
}

/// Entry point of the binary; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_config(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let report = match execute(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("gmprod: error: {e}");
            return exit_code(&e);
        }
    };
    let body = report.render(config.output_format);
    let written = match &config.output_path {
        Some(path) => fs::write(path, body.as_bytes()),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("gmprod: error: {e}");
            EXIT_IO
        }
    }
}
