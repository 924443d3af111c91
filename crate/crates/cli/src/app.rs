use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use hilfer_core::mild::MildReport;
use hilfer_core::scalar::{solve_linear_scalar, ScalarLinearProblem};
use hilfer_core::special::{mittag_leffler, MlParams};
use hilfer_core::{FracOrder, Grid, SampledPath, VerifyReport};

use crate::heat::{default_ic1, default_ic2, run_heat, Eta, HeatSetup};
use crate::sine::SineTransformPlan;
use crate::suite::{run_suite, Perturbation, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hilfer_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(hilfer_core::Error::NoConvergence { .. }) => EXIT_NO_CONVERGENCE,
            Self::Core(hilfer_core::Error::InvalidParameter(_) | hilfer_core::Error::GridTooCoarse { .. }) => EXIT_USAGE,
            Self::Input { .. } => EXIT_USAGE,
            _ => EXIT_VERIFY_FAILED,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "hilfer", version, about = "Hilfer fractional evolution equations: evaluate, solve, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the Mittag-Leffler function E_{alpha,beta}(z).
    Ml {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
    },
    /// Solve the scalar linear problem D^{γ,δ}ω = cω + η in closed form.
    SolveScalar(ScalarArgs),
    /// Solve the Dirichlet heat-type problem on (0, π) by Picard iteration.
    SolveHeat(HeatArgs),
    /// Run the identity checkers and print a JSON array of reports.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct OrderArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    delta: f64,
}

#[derive(Debug, Args)]
struct ScalarArgs {
    #[command(flatten)]
    order: OrderArgs,
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, allow_negative_numbers = true)]
    y: f64,
    #[arg(long = "T")]
    horizon: f64,
    #[arg(long)]
    steps: usize,
    /// Forcing CSV: one value per grid node, or `t,value` rows interpolated linearly.
    #[arg(long)]
    forcing: Option<PathBuf>,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EtaArg {
    None,
    Tsin,
}

#[derive(Debug, Args)]
struct HeatArgs {
    #[command(flatten)]
    order: OrderArgs,
    #[arg(long)]
    modes: usize,
    #[arg(long)]
    steps: usize,
    #[arg(long = "T")]
    horizon: f64,
    /// Physical samples of ω₁ at the collocation nodes x_j = jπ/(M+1); default x(π - x).
    #[arg(long)]
    ic1: Option<PathBuf>,
    /// Physical samples of ω₂ at the collocation nodes; default sin x.
    #[arg(long)]
    ic2: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EtaArg::None)]
    eta: EtaArg,
    /// Snapshot CSV `t,x_1,...,x_M`.
    #[arg(long, default_value = "heat.csv")]
    out: PathBuf,
    /// JSON run report.
    #[arg(long, default_value = "heat_report.json")]
    report: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Output JSON (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Shift every checked quantity by this amount (exercises the failure path).
    #[arg(long, hide = true, default_value_t = 0.0)]
    perturb: f64,
    /// Restrict the shift to checks whose name contains this text.
    #[arg(long, hide = true)]
    perturb_check: Option<String>,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<i32> {
    match cmd {
        Command::Ml { alpha, beta, z } => {
            let v = mittag_leffler(MlParams::new(alpha, beta, z)?)?;
            println!("{v}");
            Ok(EXIT_OK)
        }
        Command::SolveScalar(a) => solve_scalar(a),
        Command::SolveHeat(a) => solve_heat(a),
        Command::Verify(a) => verify(a),
    }
}

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(|source| CliError::Io { path: p.to_path_buf(), source })?),
        None => Box::new(io::stdout().lock()),
    })
}

fn solve_scalar(a: ScalarArgs) -> CliResult<i32> {
    let order = FracOrder::new(a.order.gamma, a.order.delta)?;
    let grid = Grid::new(a.horizon, a.steps)?;
    let mut problem = ScalarLinearProblem::new(order, grid, a.c, a.x, a.y)?;
    if let Some(path) = &a.forcing {
        let values = read_forcing(path, &grid)?;
        problem = problem.with_forcing(SampledPath::scalar(grid, values)?)?;
    }
    let sol = solve_linear_scalar(&problem)?;
    let mut w = csv::Writer::from_writer(output(a.out.as_deref())?);
    w.write_record(["t", "omega", "weighted_y"])?;
    let omega = sol.omega_component(0);
    for (j, y) in sol.y_component(0).iter().enumerate() {
        w.write_record([grid.node(j).to_string(), omega[j].to_string(), y.to_string()])?;
    }
    w.flush().map_err(|source| CliError::Io { path: a.out.unwrap_or_else(|| "<stdout>".into()), source })?;
    Ok(EXIT_OK)
}

fn solve_heat(a: HeatArgs) -> CliResult<i32> {
    let order = FracOrder::new(a.order.gamma, a.order.delta)?;
    let plan = SineTransformPlan::new(a.modes)?;
    let ic1 = match &a.ic1 {
        Some(p) => read_samples(p, a.modes)?,
        None => default_ic1(plan.nodes()),
    };
    let ic2 = match &a.ic2 {
        Some(p) => read_samples(p, a.modes)?,
        None => default_ic2(plan.nodes()),
    };
    let eta = match a.eta {
        EtaArg::None => Eta::None,
        EtaArg::Tsin => Eta::TSin,
    };
    let setup = HeatSetup { order, horizon: a.horizon, n_steps: a.steps, ic1, ic2, eta };
    let run = run_heat(&setup)?;

    let mut w = csv::Writer::from_writer(output(Some(&a.out))?);
    let mut header = vec!["t".to_string()];
    header.extend((1..=a.modes).map(|j| format!("x_{j}")));
    w.write_record(&header)?;
    for (t, phys) in run.snapshots()? {
        let mut row = vec![t.to_string()];
        row.extend(phys.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| CliError::Io { path: a.out.clone(), source })?;

    let report = HeatReport {
        command: "solve-heat",
        parameters: HeatParameters {
            gamma: a.order.gamma,
            delta: a.order.delta,
            modes: a.modes,
            steps: a.steps,
            horizon: a.horizon,
            eta: match eta {
                Eta::None => "none",
                Eta::TSin => "tsin",
            },
            ic1: a.ic1.as_ref().map_or_else(|| "x(pi-x)".to_string(), |p| p.display().to_string()),
            ic2: a.ic2.as_ref().map_or_else(|| "sin(x)".to_string(), |p| p.display().to_string()),
        },
        iterations: iterations(&run.report),
        contraction_margin: run.report.contraction_margin,
        contraction_certified: run.report.contraction_certified(),
        h5_radius: run.h5_radius,
        checks: run.checks.clone(),
    };
    let mut f = output(Some(&a.report))?;
    serde_json::to_writer_pretty(&mut f, &report)?;
    writeln!(f).map_err(|source| CliError::Io { path: a.report.clone(), source })?;
    Ok(if run.checks.iter().all(|c| c.pass) { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn verify(a: VerifyArgs) -> CliResult<i32> {
    let perturb = Perturbation { amount: a.perturb, target: a.perturb_check };
    let reports = run_suite(a.suite, &perturb)?;
    let mut f = output(a.out.as_deref())?;
    serde_json::to_writer_pretty(&mut f, &reports)?;
    writeln!(f).map_err(|source| CliError::Io { path: a.out.unwrap_or_else(|| "<stdout>".into()), source })?;
    Ok(if reports.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[derive(Debug, Serialize)]
struct HeatParameters {
    gamma: f64,
    delta: f64,
    modes: usize,
    steps: usize,
    #[serde(rename = "T")]
    horizon: f64,
    eta: &'static str,
    ic1: String,
    ic2: String,
}

#[derive(Debug, Serialize)]
struct IterationEntry {
    iter: usize,
    delta: f64,
}

#[derive(Debug, Serialize)]
struct HeatReport {
    command: &'static str,
    parameters: HeatParameters,
    iterations: Vec<IterationEntry>,
    contraction_margin: Option<f64>,
    contraction_certified: bool,
    h5_radius: Option<f64>,
    checks: Vec<VerifyReport>,
}

fn iterations(r: &MildReport) -> Vec<IterationEntry> {
    r.deltas.iter().enumerate().map(|(i, &d)| IterationEntry { iter: i + 1, delta: d }).collect()
}

fn read_rows(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(file);
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) if !v.is_empty() => rows.push(v),
            // a leading header line is allowed
            Err(_) if i == 0 => {}
            _ => {
                return Err(CliError::Input { path: path.to_path_buf(), message: format!("line {}: expected numbers", i + 1) })
            }
        }
    }
    Ok(rows)
}

/// Single-column samples, one per collocation node.
fn read_samples(path: &Path, n: usize) -> CliResult<Vec<f64>> {
    let rows = read_rows(path)?;
    if rows.len() != n || rows.iter().any(|r| r.len() != 1) {
        return Err(CliError::Input {
            path: path.to_path_buf(),
            message: format!("expected {n} single-value rows, got {}", rows.len()),
        });
    }
    Ok(rows.into_iter().map(|r| r[0]).collect())
}

/// One value per grid node, or `t,value` rows covering `[0, T]`.
fn read_forcing(path: &Path, grid: &Grid) -> CliResult<Vec<f64>> {
    let rows = read_rows(path)?;
    let bad = |message: String| CliError::Input { path: path.to_path_buf(), message };
    match rows.first().map(Vec::len) {
        Some(1) if rows.iter().all(|r| r.len() == 1) => {
            if rows.len() != grid.len() {
                return Err(bad(format!("expected {} values (one per grid node), got {}", grid.len(), rows.len())));
            }
            Ok(rows.into_iter().map(|r| r[0]).collect())
        }
        Some(2) if rows.iter().all(|r| r.len() == 2) => {
            let (ts, vs): (Vec<f64>, Vec<f64>) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
            if ts.windows(2).any(|w| w[1] <= w[0]) {
                return Err(bad("times must be strictly increasing".into()));
            }
            let (lo, hi) = (ts[0], ts[ts.len() - 1]);
            let eps = 1e-12 * grid.horizon();
            if lo > eps || hi < grid.horizon() - eps {
                return Err(bad(format!("forcing covers [{lo}, {hi}], need [0, {}]", grid.horizon())));
            }
            Ok(grid.nodes().iter().map(|&t| interpolate(&ts, &vs, t)).collect())
        }
        _ => Err(bad("expected one value per row or `t,value` rows".into())),
    }
}

fn interpolate(ts: &[f64], vs: &[f64], t: f64) -> f64 {
    if ts.len() == 1 {
        return vs[0];
    }
    let k = ts.partition_point(|&s| s <= t).clamp(1, ts.len() - 1);
    let (t0, t1) = (ts[k - 1], ts[k]);
    let u = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
    vs[k - 1] + u * (vs[k] - vs[k - 1])
}
