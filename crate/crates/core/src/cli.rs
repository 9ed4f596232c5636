//! Command-line front end. Argument parsing and every command live here so
//! the binary stays a thin wrapper and the commands can be driven in-process.
//!
//! Exit codes: 0 success, 1 tolerance or validity failure, 2 usage error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::mixture::{reduce_dimension, EntropyEstimate, Method, MixtureConfig, Reduction};
use crate::oracle::{self, Estimator, McSettings};
use crate::series_brute::{self, MomentName, MomentTable};
use crate::series_det;
use crate::spectral;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gme",
    version,
    about = "Average entropy of Gaussian mixtures with Gaussian random centers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Series approximation (brute-force series or determinant expansion).
    Approx(CommonArgs),
    /// Monte Carlo estimate of the average entropy.
    Mc(CommonArgs),
    /// Series orders, determinant expansion, Monte Carlo and bounds side by side.
    Compare(CommonArgs),
    /// One compare row per mu on a grid.
    Sweep(CommonArgs),
    /// Spectral identities, determinant forms, moments and coefficient assembly.
    Selftest(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long)]
    pub mu: Option<f64>,
    /// start:stop:step
    #[arg(long = "mu-grid")]
    pub mu_grid: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub order: u8,
    #[arg(long, value_enum, default_value_t = SeriesMethod::Brute)]
    pub method: SeriesMethod,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long = "center-draws", default_value_t = 100)]
    pub center_draws: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = EstimatorArg::ControlVariate)]
    pub estimator: EstimatorArg,
    #[arg(long = "q-max", default_value_t = 10)]
    pub q_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report `runtime_ms` as null so reports are byte-identical.
    #[arg(long = "no-timing")]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Approx,
    Mc,
    Compare,
    Sweep,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesMethod {
    Brute,
    Det,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorArg {
    Plain,
    ControlVariate,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Plain => Estimator::Plain,
            EstimatorArg::ControlVariate => Estimator::ControlVariate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

/// `start:stop:step`, inclusive of `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl MuGrid {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| {
                // Round away the accumulated step error, e.g. 0.05 + 2 * 0.05.
                let v = self.start + k as f64 * self.step;
                format!("{v:.12e}").parse().expect("formatted float parses")
            })
            .collect()
    }
}

impl FromStr for MuGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(invalid(format!(
                "mu grid must be start:stop:step, got {s:?}"
            )));
        };
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad number {p:?} in mu grid")))
        };
        let grid = MuGrid {
            start: num(start)?,
            stop: num(stop)?,
            step: num(step)?,
        };
        if !(grid.start.is_finite() && grid.stop.is_finite() && grid.step.is_finite()) {
            return Err(invalid("mu grid values must be finite"));
        }
        if grid.start < 0.0 {
            return Err(invalid("mu grid values must be non-negative"));
        }
        if grid.step <= 0.0 || grid.stop < grid.start {
            return Err(invalid(
                "mu grid must be strictly increasing (step > 0, stop >= start)",
            ));
        }
        Ok(grid)
    }
}

/// A validated command with all its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSpec {
    pub command: Command,
    pub n: usize,
    pub q: usize,
    pub sigma2: f64,
    pub mu: Option<f64>,
    pub mu_grid: Option<MuGrid>,
    pub order: u8,
    pub method: SeriesMethod,
    pub samples: u64,
    pub center_draws: u64,
    pub seed: u64,
    pub estimator: EstimatorArg,
    pub q_max: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

impl RunSpec {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (command, a) = match cli.command {
            CliCommand::Approx(a) => (Command::Approx, a),
            CliCommand::Mc(a) => (Command::Mc, a),
            CliCommand::Compare(a) => (Command::Compare, a),
            CliCommand::Sweep(a) => (Command::Sweep, a),
            CliCommand::Selftest(a) => (Command::Selftest, a),
        };
        let needs_problem = command != Command::Selftest;
        let (n, q) = match (a.n, a.q) {
            (Some(n), Some(q)) => (n, q),
            _ if needs_problem => return Err(invalid("--n and --q are required")),
            _ => (0, 0),
        };
        let mu_grid = a.mu_grid.as_deref().map(MuGrid::from_str).transpose()?;
        let spec = RunSpec {
            command,
            n,
            q,
            sigma2: a.sigma2,
            mu: a.mu,
            mu_grid,
            order: a.order,
            method: a.method,
            samples: a.samples,
            center_draws: a.center_draws,
            seed: a.seed,
            estimator: a.estimator,
            q_max: a.q_max,
            format: a.format,
            out: a.out,
            timing: !a.no_timing,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses an argument vector, including the program name.
    pub fn parse_from<I, T>(args: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| invalid(e.to_string()))?;
        Self::from_cli(cli)
    }

    pub fn validate(&self) -> Result<()> {
        match self.command {
            Command::Selftest => {
                if !(2..=64).contains(&self.q_max) {
                    return Err(invalid(format!(
                        "--q-max must lie in 2..=64, got {}",
                        self.q_max
                    )));
                }
                return Ok(());
            }
            Command::Sweep => {
                if self.mu_grid.is_none() {
                    return Err(invalid("sweep needs --mu-grid start:stop:step"));
                }
            }
            _ => {
                if self.mu.is_none() {
                    return Err(invalid("--mu is required"));
                }
            }
        }
        if self.order > 2 {
            return Err(invalid(format!(
                "--order must be 0, 1 or 2, got {}",
                self.order
            )));
        }
        MixtureConfig::new(self.n, self.q, self.sigma2, self.mu.unwrap_or(0.0))?;
        if matches!(
            self.command,
            Command::Mc | Command::Compare | Command::Sweep
        ) {
            self.mc_settings()?;
        }
        Ok(())
    }

    fn config(&self, mu: f64) -> Result<MixtureConfig> {
        MixtureConfig::new(self.n, self.q, self.sigma2, mu)
    }

    fn mc_settings(&self) -> Result<McSettings> {
        Ok(McSettings::new(self.samples, self.center_draws, self.seed)?
            .with_estimator(self.estimator.into()))
    }
}

/// Exit code, the serialized report, and any message for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: String,
    pub message: Option<String>,
}

impl RunOutcome {
    fn failure(exit_code: i32, e: &Error) -> Self {
        Self {
            exit_code,
            report: String::new(),
            message: Some(e.to_string()),
        }
    }
}

/// Runs one command.
pub fn run(spec: &RunSpec) -> RunOutcome {
    if let Err(e) = spec.validate() {
        return RunOutcome::failure(EXIT_USAGE, &e);
    }
    let started = Instant::now();
    let body = match spec.command {
        Command::Approx => approx(spec),
        Command::Mc => mc(spec),
        Command::Compare => compare(spec),
        Command::Sweep => sweep(spec),
        Command::Selftest => selftest(spec),
    };
    let body = match body {
        Ok(b) => b,
        Err(e @ (Error::InvalidArgument(_) | Error::Precondition(_))) => {
            return RunOutcome::failure(EXIT_USAGE, &e)
        }
        Err(e) => return RunOutcome::failure(EXIT_TOLERANCE, &e),
    };
    let runtime_ms = spec.timing.then(|| started.elapsed().as_secs_f64() * 1e3);
    let report = match spec.format {
        Format::Json => {
            let doc = json!({
                "spec": spec,
                "results": body.results,
                "residuals": body.residuals,
                "runtime_ms": runtime_ms,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => body.csv,
    };
    RunOutcome {
        exit_code: if body.pass { EXIT_OK } else { EXIT_TOLERANCE },
        report,
        message: body.message,
    }
}

struct Body {
    results: Vec<Value>,
    residuals: Vec<Value>,
    csv: String,
    pass: bool,
    message: Option<String>,
}

/// 17 significant digits in C-style exponent notation; round-trip safe.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!(
        "{mantissa}e{}{:02}",
        if exp < 0 { '-' } else { '+' },
        exp.abs()
    )
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn opt_int(x: Option<u64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

const ESTIMATE_HEADER: &str = "method,order,value,stderr,samples_per_center,center_draws,seed\n";

fn estimate_csv_row(e: &EntropyEstimate) -> String {
    format!(
        "{},{},{},{},{},{},{}\n",
        e.method.as_str(),
        e.order.map(|o| o.to_string()).unwrap_or_default(),
        format_float(e.value),
        format_float(e.stderr),
        opt_int(e.samples_per_center),
        opt_int(e.center_draws),
        opt_int(e.seed),
    )
}

fn estimates_body(
    estimates: &[EntropyEstimate],
    residuals: Vec<Value>,
    message: Option<String>,
) -> Body {
    let mut csv = String::from(ESTIMATE_HEADER);
    estimates
        .iter()
        .for_each(|e| csv.push_str(&estimate_csv_row(e)));
    Body {
        results: estimates
            .iter()
            .map(|e| serde_json::to_value(e).expect("serializes"))
            .collect(),
        residuals,
        csv,
        pass: true,
        message,
    }
}

fn reduction_note(r: &Reduction, n: usize) -> Option<String> {
    (r.offset != 0.0).then(|| {
        format!(
            "n = {n} > q = {}: series evaluated at n = {} plus offset {}",
            r.config.q,
            r.config.n,
            format_float(r.offset)
        )
    })
}

/// Series value on the reduced problem, shifted by the offset.
fn series_value(r: &Reduction, method: SeriesMethod, order: u8) -> Result<EntropyEstimate> {
    let e = match method {
        SeriesMethod::Brute => series_brute::entropy_series(&r.config, order)?,
        SeriesMethod::Det => series_det::entropy_det(&r.config)?,
    };
    Ok(e.shifted(r.offset))
}

fn approx(spec: &RunSpec) -> Result<Body> {
    let config = spec.config(spec.mu.expect("validated"))?;
    let r = reduce_dimension(&config);
    let e = series_value(&r, spec.method, spec.order)?;
    Ok(estimates_body(&[e], vec![], reduction_note(&r, config.n)))
}

fn mc(spec: &RunSpec) -> Result<Body> {
    let config = spec.config(spec.mu.expect("validated"))?;
    let e = oracle::average_entropy(&config, &spec.mc_settings()?)?;
    Ok(estimates_body(&[e], vec![], None))
}

/// Everything reported for one value of `mu`.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub mu: f64,
    pub series: [EntropyEstimate; 3],
    /// Absent outside the validity region of the determinant expansion.
    pub det: Option<EntropyEstimate>,
    pub mc: EntropyEstimate,
    pub bound_gauss_mean: f64,
    pub bound_component: f64,
    pub offset: f64,
}

impl CompareRow {
    pub fn residual(&self, order: usize) -> f64 {
        self.mc.value - self.series[order].value
    }
}

/// Computes one comparison row. Monte Carlo and the Gaussian bound use the
/// full dimension; the expansions use the reduced problem plus its offset.
pub fn compare_row(config: &MixtureConfig, settings: &McSettings) -> Result<CompareRow> {
    let r = reduce_dimension(config);
    let series = [
        series_value(&r, SeriesMethod::Brute, 0)?,
        series_value(&r, SeriesMethod::Brute, 1)?,
        series_value(&r, SeriesMethod::Brute, 2)?,
    ];
    let det = match series_value(&r, SeriesMethod::Det, 1) {
        Ok(e) => Some(e),
        Err(Error::ValidityRegion { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CompareRow {
        mu: config.mu,
        series,
        det,
        mc: oracle::average_entropy(config, settings)?,
        bound_gauss_mean: oracle::mean_gaussian_bound(config, settings)?,
        bound_component: oracle::component_bound(config)?,
        offset: r.offset,
    })
}

fn bound_estimate(value: f64, method: Method, settings: Option<&McSettings>) -> EntropyEstimate {
    let mut e = EntropyEstimate::exact(value, method, None);
    if let Some(s) = settings {
        e.center_draws = Some(s.center_draws);
        e.seed = Some(s.seed);
    }
    e
}

fn residual_json(against: &str, mu: f64, mc: &EntropyEstimate, value: Option<f64>) -> Value {
    json!({
        "mu": mu,
        "against": against,
        "value": value.map(|v| mc.value - v),
        "stderr": mc.stderr,
    })
}

fn compare(spec: &RunSpec) -> Result<Body> {
    let config = spec.config(spec.mu.expect("validated"))?;
    let settings = spec.mc_settings()?;
    let row = compare_row(&config, &settings)?;
    let mut estimates: Vec<EntropyEstimate> = row.series.to_vec();
    estimates.extend(row.det);
    estimates.push(row.mc);
    estimates.push(bound_estimate(
        row.bound_gauss_mean,
        Method::BoundGaussian,
        Some(&settings),
    ));
    estimates.push(bound_estimate(
        row.bound_component,
        Method::BoundComponent,
        None,
    ));
    let mut residuals: Vec<Value> = (0..3)
        .map(|k| {
            residual_json(
                &format!("series-brute-{k}"),
                row.mu,
                &row.mc,
                Some(row.series[k].value),
            )
        })
        .collect();
    residuals.push(residual_json(
        "series-det",
        row.mu,
        &row.mc,
        row.det.map(|d| d.value),
    ));
    let note = reduction_note(&reduce_dimension(&config), config.n);
    Ok(estimates_body(&estimates, residuals, note))
}

pub const SWEEP_HEADER: &str =
    "mu,h_series0,h_series1,h_series2,h_det,h_mc,h_mc_stderr,bound_gauss_mean,bound_component,residual2\n";

fn sweep(spec: &RunSpec) -> Result<Body> {
    let settings = spec.mc_settings()?;
    let mut rows = Vec::new();
    for mu in spec.mu_grid.expect("validated").values() {
        rows.push(compare_row(&spec.config(mu)?, &settings)?);
    }
    let mut csv = String::from(SWEEP_HEADER);
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            format_float(r.mu),
            format_float(r.series[0].value),
            format_float(r.series[1].value),
            format_float(r.series[2].value),
            opt_float(r.det.map(|d| d.value)),
            format_float(r.mc.value),
            format_float(r.mc.stderr),
            format_float(r.bound_gauss_mean),
            format_float(r.bound_component),
            format_float(r.residual(2)),
        )
        .expect("writing to a string");
    }
    let results = rows
        .iter()
        .map(|r| {
            json!({
                "mu": r.mu,
                "h_series0": r.series[0].value,
                "h_series1": r.series[1].value,
                "h_series2": r.series[2].value,
                "h_det": r.det.map(|d| d.value),
                "h_mc": r.mc.value,
                "h_mc_stderr": r.mc.stderr,
                "bound_gauss_mean": r.bound_gauss_mean,
                "bound_component": r.bound_component,
                "offset": r.offset,
            })
        })
        .collect();
    let residuals = rows
        .iter()
        .map(|r| residual_json("series-brute-2", r.mu, &r.mc, Some(r.series[2].value)))
        .collect();
    let config = spec.config(0.0)?;
    Ok(Body {
        results,
        residuals,
        csv,
        pass: true,
        message: reduction_note(&reduce_dimension(&config), config.n),
    })
}

/// One selftest suite: the worst residual found and its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name,
            max_residual,
            tolerance,
            pass: max_residual < tolerance,
        }
    }
}

pub const SPECTRAL_MUS: [f64; 6] = [1e-4, 1e-3, 1e-2, 0.1, 0.3, 0.5];
pub const DET_MUS: [f64; 3] = [1e-3, 1e-2, 0.1];
pub const MOMENT_CASES: [(usize, usize); 4] = [(1, 2), (2, 3), (3, 5), (4, 8)];
const SELFTEST_MOMENT_SAMPLES: usize = 200_000;

fn worst<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |m, r| Ok(m.max(r?.abs())))
}

/// Largest `|MC mean - closed form| / stderr` over all moment names; exact
/// zeros (no alpha vectors at `q = 2`) count as zero.
pub fn moment_z_score(n: usize, q: usize, samples: usize, seed: u64) -> Result<f64> {
    let table = MomentTable::closed_form(n, q);
    let est = series_brute::moment_mc_all(n, q, samples, seed)?;
    Ok(est.iter().fold(0.0f64, |m, (name, e): &(MomentName, _)| {
        let gap = (e.mean - table[*name]).abs();
        m.max(if gap == 0.0 { 0.0 } else { gap / e.stderr })
    }))
}

/// Runs every selftest suite for `q <= q_max`.
pub fn selftest_checks(q_max: usize, seed: u64) -> Result<Vec<Check>> {
    let grid = || (2..=q_max).flat_map(|q| SPECTRAL_MUS.map(|mu| (q, mu)));
    let bases = grid()
        .map(|(q, mu)| spectral::eigenbasis(q, mu))
        .collect::<Result<Vec<_>>>()?;
    let ortho = bases
        .iter()
        .map(|b| b.orthogonality_residual())
        .fold(0.0, f64::max);
    let diag = bases
        .iter()
        .map(|b| b.m_residual().max(b.c_residual()))
        .fold(0.0, f64::max);
    let ident = worst(grid().map(|(q, mu)| spectral::identity_suite(q, mu)))?;
    let mixing = worst(grid().map(|(q, mu)| {
        spectral::mixing_matrix(q, mu)
            .map(|w| (w.det() + 1.0).abs().max(w.orthogonality_residual()))
    }))?;
    let dets = worst(
        (3..=q_max).flat_map(|q| DET_MUS.map(|mu| series_det::closed_form_max_error(q, mu, 3))),
    )?;
    let z = worst((2..=q_max).flat_map(|q| {
        [1, q].into_iter().map(move |n| -> Result<f64> {
            let mu = 1e-3;
            let d1 = series_det::z1(n, q, mu)? - series_det::z1_numeric(n, q, mu)?;
            let d2 = series_det::z2(n, q, mu)? - series_det::z2_numeric(n, q, mu)?;
            Ok(d1.abs().max(d2.abs()))
        })
    }))?;
    let assembly = (2..=q_max)
        .flat_map(|q| (1..=q).map(move |n| series_brute::assembly_residual(n, q)))
        .fold(0.0, f64::max);
    let moments = worst(
        MOMENT_CASES
            .into_iter()
            .filter(|&(_, q)| q <= q_max)
            .map(|(n, q)| moment_z_score(n, q, SELFTEST_MOMENT_SAMPLES, seed)),
    )?;
    Ok(vec![
        Check::new("basis-orthogonality", ortho, 1e-12),
        Check::new("basis-diagonalization", diag, 1e-11),
        Check::new("identity-suite", ident, 1e-10),
        Check::new("mixing-matrix", mixing, 1e-12),
        Check::new("determinant-closed-forms", dets, 1e-11),
        Check::new("z-closed-vs-numeric", z, 1e-12),
        Check::new("coefficient-assembly", assembly, 1e-9),
        Check::new("moment-table-zscore", moments, 5.0),
    ])
}

fn selftest(spec: &RunSpec) -> Result<Body> {
    let checks = selftest_checks(spec.q_max, spec.seed)?;
    let pass = checks.iter().all(|c| c.pass);
    let mut csv = String::from("check,max_residual,tolerance,pass\n");
    for c in &checks {
        writeln!(
            csv,
            "{},{},{},{}",
            c.name,
            format_float(c.max_residual),
            format_float(c.tolerance),
            c.pass
        )
        .expect("writing to a string");
    }
    let summary = checks
        .iter()
        .map(|c| {
            format!(
                "{}: {:.3e} (tol {:.0e}) {}",
                c.name,
                c.max_residual,
                c.tolerance,
                if c.pass { "ok" } else { "FAIL" }
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Body {
        results: checks
            .iter()
            .map(|c| serde_json::to_value(c).expect("serializes"))
            .collect(),
        residuals: vec![],
        csv,
        pass,
        message: Some(summary),
    })
}
