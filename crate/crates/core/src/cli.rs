//! Command-line front end shared by the `convex-support` binary and its tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::adaptive_point::{select_bandwidth, Observations};
use crate::cone_projection::{project, ProjectionOptions};
use crate::error::{Error, Result};
use crate::geometry::GridSpec;
use crate::risk_lab::{estimate_sigma_mad, fit_report, mc_risk, read_report, write_report, SimulationConfig};
use crate::set_estimation::{estimate_set_khat, estimate_set_kprime, DEFAULT_FINE_FACTOR};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

/// Tolerance for matching a data file's theta column against the grid.
const THETA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "convex-support", version, about = "Adaptive estimation of planar convex sets from noisy support-function data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EstimatorArg {
    Khat,
    Kprime,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Ipm,
    Dykstra,
}

#[derive(Debug, clap::Args)]
pub struct NoiseArgs {
    /// Known noise level.
    #[arg(long, required_unless_present = "estimate_sigma")]
    pub sigma: Option<f64>,
    /// Estimate sigma from the data by the paired-difference MAD.
    #[arg(long, conflicts_with = "sigma")]
    pub estimate_sigma: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pointwise estimate with data-driven bandwidth; CSV out: index,theta,estimate,k.
    EstimatePoint {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        noise: NoiseArgs,
        /// 1-based grid index; all indices when omitted.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Set estimate as JSON (support vector and polygon vertices).
    EstimateSet {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long, value_enum, default_value = "khat")]
        estimator: EstimatorArg,
        /// Refinement factor for the fine-grid estimator.
        #[arg(long, default_value_t = DEFAULT_FINE_FACTOR)]
        fine_factor: usize,
    },
    /// Project a vector onto the cone of support vectors; CSV out: index,value,projected.
    Project {
        /// One value per row; a header row and extra leading columns are ignored.
        #[arg(long)]
        vector: PathBuf,
        #[arg(long, value_enum, default_value = "ipm")]
        method: MethodArg,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Monte Carlo risk study; CSV out: shape,n,target,risk,stderr,benchmark.
    SimulateRisk {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path; "-" for stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Use the MAD estimate of sigma in every replication.
        #[arg(long)]
        estimate_sigma: bool,
    },
    /// Fit log-log slopes per (shape, target) in a report CSV.
    Rates {
        #[arg(long)]
        report: PathBuf,
    },
}

pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Debug, Deserialize)]
struct DataRow {
    index: usize,
    theta: f64,
    y: f64,
}

/// Reads an `index,theta,y` file into observations on the implied grid.
pub fn read_data(path: &Path, sigma: Option<f64>) -> Result<Observations> {
    let mut rows: Vec<DataRow> = csv::Reader::from_path(path)?.deserialize().collect::<Result<_, _>>()?;
    rows.sort_by_key(|r| r.index);
    let grid = GridSpec::new(rows.len())?;
    for (pos, row) in rows.iter().enumerate() {
        if row.index != pos + 1 {
            return Err(Error::InvalidInput(format!("data indices must be 1..={} without gaps", rows.len())));
        }
        let expected = grid.theta(row.index as isize);
        if (row.theta - expected).abs() > THETA_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "row {}: theta {} does not match grid angle {expected}",
                row.index, row.theta
            )));
        }
    }
    let y: Vec<f64> = rows.iter().map(|r| r.y).collect();
    let sigma = match sigma {
        Some(s) => s,
        None => estimate_sigma_mad(&y)?,
    };
    Observations::new(y, sigma, grid)
}

/// Writes observations in the `index,theta,y` layout.
pub fn write_data<W: Write>(writer: W, obs: &Observations) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["index", "theta", "y"])?;
    for (i, y) in obs.values().iter().enumerate() {
        out.write_record(&[(i + 1).to_string(), obs.grid().theta(i as isize + 1).to_string(), y.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_path(path)?;
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let Some(field) = record.iter().next_back() else { continue };
        match field.trim().parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if line == 0 => {}
            Err(_) => return Err(Error::InvalidInput(format!("line {}: not a number: {field:?}", line + 1))),
        }
    }
    Ok(values)
}

#[derive(Serialize)]
struct PointRow {
    index: usize,
    theta: f64,
    estimate: f64,
    k: usize,
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::InvalidInput(e.to_string()))?;
    execute(cli.command, out, err)
}

pub fn execute<W: Write, E: Write>(command: Command, out: &mut W, err: &mut E) -> Result<()> {
    match command {
        Command::EstimatePoint { data, noise, index } => {
            let obs = read_data(&data, noise.sigma)?;
            let indices: Vec<usize> = match index {
                Some(i) => vec![i],
                None => (1..=obs.grid().n()).collect(),
            };
            let mut csv_out = csv::Writer::from_writer(&mut *out);
            for i in indices {
                let est = select_bandwidth(&obs, i)?;
                csv_out.serialize(PointRow {
                    index: i,
                    theta: obs.grid().theta(i as isize),
                    estimate: est.value,
                    k: est.chosen_k,
                })?;
            }
            csv_out.flush()?;
        }
        Command::EstimateSet { data, noise, estimator, fine_factor } => {
            let obs = read_data(&data, noise.sigma)?;
            let est = match estimator {
                EstimatorArg::Khat => estimate_set_khat(&obs)?,
                EstimatorArg::Kprime => estimate_set_kprime(&obs, fine_factor)?,
            };
            writeln!(err, "sigma = {}, projection iterations = {}", obs.sigma(), est.projection_iterations)?;
            if !est.converged {
                return Err(Error::NotConverged { iterations: est.projection_iterations, residual: f64::NAN });
            }
            serde_json::to_writer_pretty(&mut *out, &est)?;
            writeln!(out)?;
        }
        Command::Project { vector, method, max_iter } => {
            let v = read_vector(&vector)?;
            let mut options = match method {
                MethodArg::Ipm => ProjectionOptions::default(),
                MethodArg::Dykstra => ProjectionOptions::dykstra(),
            };
            if let Some(m) = max_iter {
                options = options.with_max_iter(m);
            }
            let result = project(&v, &options)?;
            let mut csv_out = csv::Writer::from_writer(&mut *out);
            csv_out.write_record(["index", "value", "projected"])?;
            for (i, (a, b)) in v.iter().zip(&result.projected).enumerate() {
                csv_out.write_record(&[(i + 1).to_string(), a.to_string(), b.to_string()])?;
            }
            csv_out.flush()?;
            writeln!(
                err,
                "iterations = {}, distance = {:e}, residual = {:e}, converged = {}",
                result.iterations, result.distance, result.residual, result.converged
            )?;
            result.require_converged()?;
        }
        Command::SimulateRisk { config, output, estimate_sigma } => {
            let mut config = SimulationConfig::load(&config)?;
            config.estimate_sigma |= estimate_sigma;
            let report = mc_risk(&config)?;
            let records = report.records();
            match output.or_else(|| config.output.clone()) {
                Some(path) if path.as_os_str() != "-" => write_report(std::fs::File::create(path)?, &records)?,
                _ => write_report(&mut *out, &records)?,
            }
            for row in &report.rows {
                if row.failures > 0 {
                    writeln!(err, "n = {}: {} replications failed to converge", row.n, row.failures)?;
                }
            }
            if let Some(fit) = report.fit {
                write!(err, "slope = {:.4} (s.e. {:.4})", fit.slope, fit.stderr)?;
                if let (Some(expected), Some(ok)) = (report.expected_slope, report.slope_within_band()) {
                    write!(err, ", expected {expected} +/- {}: {}", report.slope_tolerance, if ok { "ok" } else { "outside band" })?;
                }
                writeln!(err)?;
            }
        }
        Command::Rates { report } => {
            let records = read_report(std::fs::File::open(report)?)?;
            if records.is_empty() {
                return Err(Error::InvalidInput("report has no rows".into()));
            }
            let mut csv_out = csv::Writer::from_writer(&mut *out);
            csv_out.write_record(["shape", "target", "points", "slope", "stderr"])?;
            let mut first_error = None;
            for (shape, target, fit) in fit_report(&records) {
                let points = records.iter().filter(|r| r.shape == shape && r.target == target).count();
                match fit {
                    Ok(f) => csv_out.write_record(&[shape, target, points.to_string(), f.slope.to_string(), f.stderr.to_string()])?,
                    Err(e) => {
                        writeln!(err, "{shape} / {target}: {e}")?;
                        first_error.get_or_insert(e);
                    }
                }
            }
            csv_out.flush()?;
            if let Some(e) = first_error {
                return Err(e);
            }
        }
    }
    Ok(())
}
