//! The `dqpt` command-line front end.
//!
//! Every subcommand writes a table (CSV by default, JSON on request) whose
//! header records the command line and the resolved configuration, so a run
//! can be repeated from its own output. `verify` writes a JSON report.
//!
//! Exit codes: 0 success, 2 argument error, 3 tolerance breach, 4 resource
//! guard, 1 anything else.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::duality::{duality_scan, DualityCheck};
use crate::loschmidt::{echo_series, uniform_times, EchoSeries};
use crate::oracle::QuenchOracle;
use crate::qsl::{energy_variance, qsl_report, tau_min_stats_in};
use crate::spectral::{QuenchSpec, Sector};
use crate::zeros::{critical_gap, critical_times, mean_spacing, zero_set, GapSide};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

pub const DUALITY_TOLERANCE: f64 = 1e-12;
pub const ORACLE_TOLERANCE: f64 = 1e-8;
pub const MOMENT_TOLERANCE: f64 = 1e-8;
pub const LIMIT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "dqpt", version, about = "Loschmidt-echo zeros and speed limits of the transverse-field Ising ring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Echo and rate-function time series
    Echo(EchoArgs),
    /// Matched postquench fields per mode over a range of prequench fields
    Zeros(ZerosArgs),
    /// Mean spacing of matched fields, or their gap to a critical point
    Spacing(SpacingArgs),
    /// Speed-limit times per ring size or per mode
    Qsl(QslArgs),
    /// Mean and variance of τ_min over ring sizes
    Stats(StatsArgs),
    /// Duality and exact-diagonalization checks as a JSON report
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; standard output when omitted
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn parse_sector(s: &str) -> Result<Sector, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `a:b:step`, inclusive of `b` when it lies on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, step] = parts.as_slice() else {
            return Err(format!("expected start:end:step, got `{s}`"));
        };
        let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
        let range = SizeRange { start: num(a)?, end: num(b)?, step: num(step)? };
        if range.step == 0 || range.start > range.end {
            return Err(format!("empty size range `{s}`"));
        }
        Ok(range)
    }
}

impl SizeRange {
    pub fn sizes(&self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.step).collect()
    }
}

/// `a:b:step` over reals; points are `a + i·step` up to `b` within rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloatRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl FromStr for FloatRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, step] = parts.as_slice() else {
            return Err(format!("expected start:end:step, got `{s}`"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        let range = FloatRange { start: num(a)?, end: num(b)?, step: num(step)? };
        let ok = [range.start, range.end, range.step].iter().all(|v| v.is_finite());
        if !ok || range.step <= 0.0 || range.start > range.end {
            return Err(format!("invalid range `{s}`"));
        }
        Ok(range)
    }
}

impl FloatRange {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step * (1.0 + 1e-12)).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EchoArgs {
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub gamma_i: f64,
    /// Explicit postquench field; otherwise matched fields are used
    #[arg(long, allow_hyphen_values = true, conflicts_with = "mode")]
    pub gamma_f: Option<f64>,
    /// Matched field of grid mode m only
    #[arg(long)]
    pub mode: Option<usize>,
    /// Include matched fields γ_f ≤ 0
    #[arg(long)]
    pub all_modes: bool,
    #[arg(long = "L", default_value_t = 22)]
    pub size: usize,
    #[arg(long, default_value = "apbc", value_parser = parse_sector)]
    pub sector: Sector,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 2001)]
    pub t_points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZerosArgs {
    /// Prequench fields as start:end:step
    #[arg(long, default_value = "-3:3:0.01", allow_hyphen_values = true)]
    pub gamma_i_range: FloatRange,
    /// Only this grid mode
    #[arg(long)]
    pub mode: Option<usize>,
    #[arg(long = "L", default_value_t = 14)]
    pub size: usize,
    #[arg(long, default_value = "apbc", value_parser = parse_sector)]
    pub sector: Sector,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingKind {
    /// Mean spacing of adjacent matched fields
    Mean,
    /// Smallest distance of a matched field to ±1
    Gap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl From<Side> for GapSide {
    fn from(side: Side) -> Self {
        match side {
            Side::Plus => GapSide::Plus1,
            Side::Minus => GapSide::Minus1,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpacingArgs {
    #[arg(long, value_enum, default_value_t = SpacingKind::Mean)]
    pub what: SpacingKind,
    /// One or more prequench fields, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1.5", allow_hyphen_values = true)]
    pub gamma_i: Vec<f64>,
    #[arg(long = "L-range", default_value = "100:4000:100")]
    pub sizes: SizeRange,
    /// Critical point for `--what gap`
    #[arg(long, value_enum, default_value_t = Side::Plus)]
    pub side: Side,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QslKind {
    /// τ_min, τ_max and the modes closest to ±1 per size
    Extremes,
    /// Every matched mode of every size
    Modes,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QslArgs {
    #[arg(long, value_enum, default_value_t = QslKind::Extremes)]
    pub what: QslKind,
    #[arg(long, value_delimiter = ',', default_value = "0.3", allow_hyphen_values = true)]
    pub gamma_i: Vec<f64>,
    /// Single size; overrides --L-range
    #[arg(long = "L")]
    pub size: Option<usize>,
    #[arg(long = "L-range", default_value = "10:1000:10")]
    pub sizes: SizeRange,
    #[arg(long, default_value = "apbc", value_parser = parse_sector)]
    pub sector: Sector,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StatsArgs {
    #[arg(long, default_value = "0:2:0.05", allow_hyphen_values = true)]
    pub gamma_i_range: FloatRange,
    #[arg(long = "L-range", default_value = "10:10000:2")]
    pub sizes: SizeRange,
    #[arg(long, default_value = "apbc", value_parser = parse_sector)]
    pub sector: Sector,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Oracle sizes
    #[arg(long = "L-range", default_value = "4:10:2")]
    pub sizes: SizeRange,
    /// Oracle fields; every ordered pair is checked
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,1.5,3")]
    pub gamma: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 200)]
    pub t_points: usize,
    /// Duality sizes
    #[arg(long = "duality-L", value_delimiter = ',', default_value = "14,400")]
    pub duality_sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.8,1.25,2.5")]
    pub duality_gamma: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub duality_t_points: usize,
    /// Sizes of the h_f = 0, γ_i = 10⁶ limit check
    #[arg(long = "limit-L", value_delimiter = ',', default_value = "8,100,4000")]
    pub limit_sizes: Vec<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

/// A failed run: exit code plus message for the error stream.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Size { .. } | Error::Domain(_) | Error::Argument(_) => EXIT_ARGUMENT,
            Error::ResourceGuard { .. } => EXIT_RESOURCE,
            Error::Degenerate { .. } | Error::Io(_) => EXIT_FAILURE,
        };
        Failure { code, message: err.to_string() }
    }
}

/// Shortest round-trip decimal; `inf` and `-inf` for infinities.
pub fn render_number(v: f64) -> String {
    if v == 0.0 {
        // no "-0"
        return "0".into();
    }
    format!("{v}")
}

fn json_number(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(render_number(v))
    }
}

/// Rows of numbers split into optionally labelled blocks.
#[derive(Debug, Clone, Default)]
struct Table {
    columns: Vec<&'static str>,
    blocks: Vec<(Option<String>, Vec<Vec<f64>>)>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), blocks: Vec::new() }
    }

    fn block(&mut self, label: Option<String>, rows: Vec<Vec<f64>>) {
        self.blocks.push((label, rows));
    }

    fn render(&self, format: Format, command: &str, config: &Value) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                writeln!(out, "# command: {command}").unwrap();
                writeln!(out, "# config: {config}").unwrap();
                writeln!(out, "# columns: {}", self.columns.join(",")).unwrap();
                for (label, rows) in &self.blocks {
                    if let Some(label) = label {
                        writeln!(out, "# series {label}").unwrap();
                    }
                    for row in rows {
                        let cells: Vec<String> = row.iter().map(|&v| render_number(v)).collect();
                        writeln!(out, "{}", cells.join(",")).unwrap();
                    }
                }
                out
            }
            Format::Json => {
                let series: Vec<Value> = self
                    .blocks
                    .iter()
                    .map(|(label, rows)| {
                        let rows: Vec<Value> =
                            rows.iter().map(|r| Value::Array(r.iter().map(|&v| json_number(v)).collect())).collect();
                        json!({ "label": label, "rows": rows })
                    })
                    .collect();
                let doc = json!({
                    "command": command,
                    "config": config,
                    "columns": self.columns,
                    "series": series,
                });
                serde_json::to_string_pretty(&doc).unwrap() + "\n"
            }
        }
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn echo_table(args: &EchoArgs) -> Result<Table, Failure> {
    let times = uniform_times(args.t_max, args.t_points)?;
    let rows = |series: EchoSeries| -> Vec<Vec<f64>> {
        (0..series.len()).map(|i| vec![series.times[i], series.echo[i], series.rate[i]]).collect()
    };
    let mut table = Table::new(&["Jt", "echo", "rate"]);
    if let Some(gf) = args.gamma_f {
        let spec = QuenchSpec::dimensionless(args.gamma_i, gf, args.size, args.sector)?;
        table.block(None, rows(echo_series(&spec, &times)?));
        return Ok(table);
    }
    let solutions: Vec<_> = zero_set(args.gamma_i, args.size, args.sector)
        .into_iter()
        .filter(|s| match args.mode {
            Some(m) => s.mode == m,
            None => args.all_modes || s.gamma_f().finite().is_some_and(|g| g > 0.0),
        })
        .collect();
    if let Some(m) = args.mode {
        let Some(sol) = solutions.first() else {
            return Err(Error::argument(format!("no mode {m} on this grid")).into());
        };
        if sol.is_unbounded() {
            return Err(Error::domain(format!("mode {m} has an unbounded matched field")).into());
        }
    }
    for sol in solutions.iter().filter(|s| !s.is_unbounded()) {
        let spec = sol.quench(1.0)?;
        let t0 = critical_times(sol, 0)?.times[0];
        let label = format!(
            "mode={} k={} gamma_f={} t0={}",
            sol.mode,
            render_number(sol.k),
            sol.gamma_f(),
            render_number(t0)
        );
        table.block(Some(label), rows(echo_series(&spec, &times)?));
    }
    Ok(table)
}

fn zeros_table(args: &ZerosArgs) -> Result<Table, Failure> {
    crate::spectral::momentum_grid(args.size, args.sector)?;
    let gammas = args.gamma_i_range.values();
    let per_gamma: Vec<_> = gammas.par_iter().map(|&g| zero_set(g, args.size, args.sector)).collect();
    let modes = args.sector.mode_count(args.size);
    let mut table = Table::new(&["mode", "k", "gamma_i", "gamma_f"]);
    for m in (1..=modes).filter(|m| args.mode.is_none_or(|sel| sel == *m)) {
        let rows: Vec<Vec<f64>> = per_gamma
            .iter()
            .map(|set| {
                let s = &set[m - 1];
                vec![m as f64, s.k, s.gamma_i, s.gamma_f().to_f64()]
            })
            .collect();
        let k = rows.first().map_or(0.0, |r| r[1]);
        table.block(Some(format!("mode={m} k={}", render_number(k))), rows);
    }
    Ok(table)
}

fn spacing_table(args: &SpacingArgs) -> Result<Table, Failure> {
    let sizes = args.sizes.sizes();
    let mut table = match args.what {
        SpacingKind::Mean => Table::new(&["gamma_i", "L", "spacing", "four_over_L", "pairs", "excluded"]),
        SpacingKind::Gap => Table::new(&["gamma_i", "L", "inv_L2", "gap", "alpha_over_L2", "target", "mode"]),
    };
    for &g in &args.gamma_i {
        let rows: Result<Vec<Vec<f64>>, Error> = sizes
            .par_iter()
            .map(|&l| match args.what {
                SpacingKind::Mean => {
                    let s = mean_spacing(g, l)?;
                    Ok(vec![g, l as f64, s.value, 4.0 / l as f64, s.pairs as f64, s.excluded as f64])
                }
                SpacingKind::Gap => {
                    let side = GapSide::from(args.side);
                    let c = critical_gap(g, l, side)?;
                    let inv = 1.0 / (l as f64 * l as f64);
                    Ok(vec![g, l as f64, inv, c.gap, c.asymptote.unwrap_or(f64::INFINITY), side.target(), c.mode as f64])
                }
            })
            .collect();
        table.block(Some(format!("gamma_i={}", render_number(g))), rows?);
    }
    Ok(table)
}

fn qsl_table(args: &QslArgs) -> Result<Table, Failure> {
    let sizes = match args.size {
        Some(l) => vec![l],
        None => args.sizes.sizes(),
    };
    let mut table = match args.what {
        QslKind::Extremes => Table::new(&[
            "gamma_i",
            "L",
            "inv_L",
            "tau_min",
            "tau_min_unbounded",
            "tau_max",
            "tau_near_plus1",
            "tau_near_minus1",
            "L_over_4",
            "pi_over_4",
            "pi2_over_4L",
        ]),
        QslKind::Modes => Table::new(&["gamma_i", "L", "mode", "k", "gamma_f", "energy", "tau"]),
    };
    for &g in &args.gamma_i {
        let reports: Result<Vec<_>, Error> = sizes.par_iter().map(|&l| qsl_report(g, l, args.sector)).collect();
        let mut rows = Vec::new();
        for r in reports? {
            let lf = r.size as f64;
            match args.what {
                QslKind::Extremes => {
                    let near = |t: f64| r.closest_to(t).map_or(f64::INFINITY, |e| e.tau);
                    rows.push(vec![
                        g,
                        lf,
                        1.0 / lf,
                        r.tau_min(),
                        flag(r.tau_min_unbounded()),
                        r.tau_max().unwrap_or(r.tau_min()),
                        near(1.0),
                        near(-1.0),
                        lf / 4.0,
                        std::f64::consts::FRAC_PI_4,
                        std::f64::consts::PI.powi(2) / (4.0 * lf),
                    ]);
                }
                QslKind::Modes => {
                    for e in &r.entries {
                        rows.push(vec![g, lf, e.mode as f64, e.k, e.gamma_f.to_f64(), e.energy.to_f64(), e.tau]);
                    }
                }
            }
        }
        table.block(Some(format!("gamma_i={}", render_number(g))), rows);
    }
    Ok(table)
}

fn stats_table(args: &StatsArgs) -> Result<Table, Failure> {
    let r = args.sizes;
    let mut rows = Vec::new();
    for g in args.gamma_i_range.values() {
        let s = tau_min_stats_in(args.sector, g, r.start, r.end, r.step)?;
        rows.push(vec![g, s.mean, s.variance, s.samples as f64, s.unbounded as f64]);
    }
    let mut table = Table::new(&["gamma_i", "mean", "variance", "samples", "unbounded"]);
    table.block(None, rows);
    Ok(table)
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleEntry {
    pub size: usize,
    pub gamma_i: f64,
    pub gamma_f: f64,
    pub max_abs_echo_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentEntry {
    pub size: usize,
    pub gamma_i: f64,
    pub gamma_f: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitEntry {
    pub size: usize,
    /// `ΔE / (J √L)`
    pub ratio: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub duality: f64,
    pub oracle_echo: f64,
    pub moments: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub command: String,
    pub config: Value,
    pub tolerances: Tolerances,
    pub duality_max_rel_error: f64,
    pub duality: Vec<DualityCheck>,
    pub oracle_max_abs_error: f64,
    pub oracle: Vec<OracleEntry>,
    pub moment_max_delta: f64,
    pub moments: Vec<MomentEntry>,
    pub limit: Vec<LimitEntry>,
    pub pass: bool,
}

fn max_of(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

pub fn verify(args: &VerifyArgs, command: String, config: Value) -> Result<VerifyReport, Failure> {
    let times = uniform_times(args.t_max, args.t_points)?;
    let sizes = args.sizes.sizes();
    for &l in &sizes {
        if !(crate::oracle::MIN_SITES..=crate::oracle::MAX_SITES).contains(&l) {
            return Err(Error::ResourceGuard { size: l, min: crate::oracle::MIN_SITES, max: crate::oracle::MAX_SITES }.into());
        }
    }
    let mut oracle_jobs = Vec::new();
    for &l in &sizes {
        for &gi in &args.gamma {
            for &gf in &args.gamma {
                oracle_jobs.push((l, gi, gf));
            }
        }
    }
    let checked: Result<Vec<(OracleEntry, MomentEntry)>, Error> = oracle_jobs
        .par_iter()
        .map(|&(l, gi, gf)| {
            let oracle = QuenchOracle::new(l, 1.0, gi, gf)?;
            let spec = QuenchSpec::dimensionless(gi, gf, l, Sector::EvenApbc)?;
            let series = echo_series(&spec, &times)?;
            let err = max_of(times.iter().zip(&series.echo).map(|(&t, &e)| (oracle.echo(t) - e).abs()));
            let closed = energy_variance(&spec)?;
            let direct = oracle.energy_variance();
            Ok((
                OracleEntry { size: l, gamma_i: gi, gamma_f: gf, max_abs_echo_error: err },
                MomentEntry { size: l, gamma_i: gi, gamma_f: gf, closed_form: closed, oracle: direct, delta: (closed - direct).abs() },
            ))
        })
        .collect();
    let (oracle, moments): (Vec<_>, Vec<_>) = checked?.into_iter().unzip();

    let dual_times = uniform_times(args.t_max, args.duality_t_points)?;
    let mut dual_jobs = Vec::new();
    for &l in &args.duality_sizes {
        for sector in [Sector::EvenApbc, Sector::OddPbc] {
            for &gi in &args.duality_gamma {
                for &gf in &args.duality_gamma {
                    dual_jobs.push((l, sector, gi, gf));
                }
            }
        }
    }
    let duality: Result<Vec<DualityCheck>, Error> =
        dual_jobs.par_iter().map(|&(l, sector, gi, gf)| duality_scan(gi, gf, l, sector, &dual_times)).collect();
    let duality = duality?;

    let limit: Result<Vec<LimitEntry>, Error> = args
        .limit_sizes
        .iter()
        .map(|&l| {
            let spec = QuenchSpec::dimensionless(1e6, 0.0, l, Sector::EvenApbc)?;
            let ratio = energy_variance(&spec)?.sqrt() / (l as f64).sqrt();
            Ok(LimitEntry { size: l, ratio, deviation: (ratio - 1.0).abs() })
        })
        .collect();
    let limit = limit?;

    let duality_max = max_of(duality.iter().map(|d| d.max_rel_error));
    let oracle_max = max_of(oracle.iter().map(|o| o.max_abs_echo_error));
    let moment_max = max_of(moments.iter().map(|m| m.delta));
    let pass = duality_max <= DUALITY_TOLERANCE
        && oracle_max <= ORACLE_TOLERANCE
        && moment_max <= MOMENT_TOLERANCE
        && limit.iter().all(|l| l.deviation <= LIMIT_TOLERANCE);
    Ok(VerifyReport {
        command,
        config,
        tolerances: Tolerances {
            duality: DUALITY_TOLERANCE,
            oracle_echo: ORACLE_TOLERANCE,
            moments: MOMENT_TOLERANCE,
            limit: LIMIT_TOLERANCE,
        },
        duality_max_rel_error: duality_max,
        duality,
        oracle_max_abs_error: oracle_max,
        oracle,
        moment_max_delta: moment_max,
        moments,
        limit,
        pass,
    })
}

fn quote(arg: &str) -> String {
    let plain = !arg.is_empty() && arg.chars().all(|c| c.is_ascii_alphanumeric() || "-_.:,=/+".contains(c));
    if plain {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', r"'\''"))
    }
}

/// The command line without its program path and `--out`, as written into
/// output headers.
pub fn header_command(args: &[String]) -> String {
    let mut words = vec!["dqpt".to_string()];
    let mut skip = false;
    for arg in args {
        if skip {
            skip = false;
        } else if arg == "--out" {
            skip = true;
        } else if !arg.starts_with("--out=") {
            words.push(quote(arg));
        }
    }
    words.join(" ")
}

fn config_of<T: Serialize>(command: &str, args: &T) -> Value {
    json!({ "command": command, "args": args })
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(Error::from)?;
        }
    }
    Ok(())
}

/// Runs one parsed invocation. `args` excludes the program name.
pub fn execute(cli: &Cli, args: &[String]) -> Result<(), Failure> {
    let command = header_command(args);
    let (table, output, config) = match &cli.command {
        Command::Echo(a) => (echo_table(a)?, &a.output, config_of("echo", a)),
        Command::Zeros(a) => (zeros_table(a)?, &a.output, config_of("zeros", a)),
        Command::Spacing(a) => (spacing_table(a)?, &a.output, config_of("spacing", a)),
        Command::Qsl(a) => (qsl_table(a)?, &a.output, config_of("qsl", a)),
        Command::Stats(a) => (stats_table(a)?, &a.output, config_of("stats", a)),
        Command::Verify(a) => {
            if a.output.format == Format::Csv && args.iter().any(|s| s == "--format" || s.starts_with("--format=")) {
                return Err(Error::argument("verify writes JSON only").into());
            }
            let report = verify(a, command, config_of("verify", a))?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            emit(&a.output, &text)?;
            if !report.pass {
                return Err(Failure { code: EXIT_TOLERANCE, message: "tolerance breach".into() });
            }
            return Ok(());
        }
    };
    emit(output, &table.render(output.format, &command, &config))
}

/// Parses `args` (without the program name), runs, and returns the exit code.
pub fn run(args: &[String]) -> i32 {
    let argv = std::iter::once("dqpt".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { EXIT_ARGUMENT } else { EXIT_OK };
        }
    };
    match execute(&cli, args) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("dqpt: {}", f.message);
            f.code
        }
    }
}

/// Sizes the global worker pool from `DQPT_THREADS` when set.
pub fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("DQPT_THREADS") else { return Ok(()) };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::argument(format!("DQPT_THREADS = `{value}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure { code: EXIT_FAILURE, message: e.to_string() })
}
