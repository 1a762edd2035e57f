//! Data generation, noise-level estimation and Monte Carlo risk studies.

use std::path::{Path, PathBuf};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adaptive_point::{oracle_kstar, select_bandwidth, Observations};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, GridSpec, SupportFunction};
use crate::set_estimation::{
    estimate_set_khat, estimate_set_kprime, loss_fixed_design, loss_integral, SetEstimate,
    DEFAULT_FINE_FACTOR,
};

/// Normalization of the paired-difference MAD, used as given. For Gaussian
/// noise the differences have standard deviation `sqrt(2) sigma`, so the
/// estimate concentrates at `sqrt(2) * 0.674490 / 1.349 * sigma`, which is
/// [`MAD_EXPECTED_RATIO`] times `sigma`.
pub const MAD_NORMALIZER: f64 = 1.349;
/// `sqrt(2) * Phi^{-1}(3/4) / 1.349`.
pub const MAD_EXPECTED_RATIO: f64 = std::f64::consts::SQRT_2 * 0.674_489_750_196_081_7 / MAD_NORMALIZER;

/// Default half-width of the acceptance band around a theoretical slope.
pub const DEFAULT_SLOPE_TOLERANCE: f64 = 0.15;
pub const DEFAULT_QUADRATURE_POINTS: usize = 8192;

fn uniform(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn box_muller(a: u64, b: u64) -> f64 {
    let u1 = uniform(a);
    let u2 = uniform(b);
    (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn stream(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

/// Standard normal number `index` (0-based) of replication `replication`.
/// It is built from the two 64-bit words at positions `2 index` and
/// `2 index + 1` of ChaCha stream `replication` under key `seed`, so any
/// entry can be recomputed in isolation.
pub fn standard_normal(seed: u64, replication: u64, index: u64) -> f64 {
    let mut rng = stream(seed, replication);
    rng.set_word_pos(4 * index as u128);
    let a = rng.next_u64();
    let b = rng.next_u64();
    box_muller(a, b)
}

/// `y_i = h(theta_i) + sigma z_i` with `z_i = standard_normal(seed, replication, i - 1)`.
pub fn generate<S: SupportFunction + ?Sized>(
    body: &S,
    grid: &GridSpec,
    sigma: f64,
    seed: u64,
    replication: u64,
) -> Result<Observations> {
    let mut rng = stream(seed, replication);
    let y = grid
        .thetas()
        .into_iter()
        .map(|t| {
            let a = rng.next_u64();
            let b = rng.next_u64();
            body.support(t) + sigma * box_muller(a, b)
        })
        .collect();
    Observations::new(y, sigma, grid.clone())
}

/// Median, averaging the two middle order statistics for even length.
fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}

/// `median |delta_i - median(delta)| / 1.349` for `delta_i = y_{2i} - y_{2i-1}`.
pub fn estimate_sigma_mad(y: &[f64]) -> Result<f64> {
    if y.len() < 4 {
        return Err(Error::InvalidInput(format!("MAD needs at least 4 observations, got {}", y.len())));
    }
    let mut delta: Vec<f64> = y.chunks_exact(2).map(|p| p[1] - p[0]).collect();
    let center = median(&mut delta);
    let mut dev: Vec<f64> = delta.iter().map(|d| (d - center).abs()).collect();
    Ok(median(&mut dev) / MAD_NORMALIZER)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Target {
    /// Squared error of the pointwise estimate at a grid angle.
    Point { theta: f64 },
    /// Fixed-design loss of the projected estimate.
    FixedDesign,
    /// Integral loss of the fine-grid estimate.
    Integral {
        #[serde(default = "default_fine_factor")]
        fine_factor: usize,
        #[serde(default = "default_quadrature_points")]
        quadrature_points: usize,
    },
}

fn default_fine_factor() -> usize {
    DEFAULT_FINE_FACTOR
}

fn default_quadrature_points() -> usize {
    DEFAULT_QUADRATURE_POINTS
}

fn default_slope_tolerance() -> f64 {
    DEFAULT_SLOPE_TOLERANCE
}

impl Target {
    pub fn label(&self) -> String {
        match self {
            Target::Point { theta } => format!("point@{theta}"),
            Target::FixedDesign => "fixed_design".to_string(),
            Target::Integral { fine_factor, .. } => format!("integral@{fine_factor}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    /// Label for the report; defaults to the body's kind.
    #[serde(default)]
    pub name: Option<String>,
    pub shape: ConvexBody,
    pub n: Vec<usize>,
    pub sigma: f64,
    pub replications: usize,
    pub seed: u64,
    pub target: Target,
    /// Where `simulate-risk` writes the CSV report.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Replace the known sigma by the MAD estimate in each replication.
    #[serde(default)]
    pub estimate_sigma: bool,
    /// Theoretical log-log slope, if one is to be checked.
    #[serde(default)]
    pub expected_slope: Option<f64>,
    #[serde(default = "default_slope_tolerance")]
    pub slope_tolerance: f64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidInput("replications must be at least 1".into()));
        }
        if self.n.is_empty() {
            return Err(Error::InvalidInput("n list is empty".into()));
        }
        for &n in &self.n {
            let grid = GridSpec::new(n)?;
            if let Target::Point { theta } = self.target {
                if grid.index_of_angle(theta).is_none() {
                    return Err(Error::InvalidInput(format!("theta = {theta} is not a grid angle for n = {n}")));
                }
            }
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidInput(format!("sigma must be non-negative, got {}", self.sigma)));
        }
        if !(self.slope_tolerance > 0.0) {
            return Err(Error::InvalidInput("slope_tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: SimulationConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.shape.kind().to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskRow {
    pub n: usize,
    /// Mean loss over the successful replications.
    pub risk: f64,
    /// Monte Carlo standard error of `risk`.
    pub stderr: f64,
    /// `sigma^2 / (k_star + 1)`, averaged over the grid for set targets.
    pub benchmark: f64,
    /// Replications lost to projection failures.
    pub failures: usize,
    /// Set targets: worst polygon-versus-support-vector disagreement.
    pub max_realization_defect: Option<f64>,
    /// Set targets: replications where projecting increased the grid loss
    /// against the truth by more than `1e-9`.
    pub contraction_violations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskReport {
    pub shape: String,
    pub target: String,
    pub rows: Vec<RiskRow>,
    /// Present when at least four grid sizes were run.
    pub fit: Option<RateFit>,
    pub expected_slope: Option<f64>,
    pub slope_tolerance: f64,
}

impl RiskReport {
    /// `Some(true)` if the fitted slope is within tolerance of the expected one.
    pub fn slope_within_band(&self) -> Option<bool> {
        let fit = self.fit?;
        let expected = self.expected_slope?;
        Some((fit.slope - expected).abs() <= self.slope_tolerance)
    }
}

/// Ordinary least squares of `log risk` on `log n`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 4 {
        return Err(Error::InvalidInput(format!("rate fit needs at least 4 points, got {}", points.len())));
    }
    if let Some((n, r)) = points.iter().find(|(n, r)| !(*n > 0.0 && *r > 0.0)) {
        return Err(Error::InvalidInput(format!("rate fit needs positive n and risk, got ({n}, {r})")));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(RateFit { slope, stderr: (ssr / (k - 2.0) / sxx).sqrt(), intercept })
}

fn observations(config: &SimulationConfig, grid: &GridSpec, replication: u64) -> Result<Observations> {
    let obs = generate(&config.shape, grid, config.sigma, config.seed, replication)?;
    if config.estimate_sigma {
        let sigma = estimate_sigma_mad(obs.values())?;
        obs.with_sigma(sigma)
    } else {
        Ok(obs)
    }
}

/// Mean and standard error, summing in replication order.
fn summarize(losses: &[f64]) -> (f64, f64) {
    let m = losses.len() as f64;
    let mean = losses.iter().sum::<f64>() / m;
    if losses.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = losses.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

fn finish_report(config: &SimulationConfig, rows: Vec<RiskRow>) -> RiskReport {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.risk)).collect();
    RiskReport {
        shape: config.label(),
        target: config.target.label(),
        fit: fit_rate(&points).ok(),
        rows,
        expected_slope: config.expected_slope,
        slope_tolerance: config.slope_tolerance,
    }
}

/// Pointwise squared error at the configured angle.
pub fn mc_point_risk(config: &SimulationConfig) -> Result<RiskReport> {
    config.validate()?;
    let Target::Point { theta } = config.target else {
        return Err(Error::InvalidInput("mc_point_risk needs a point target".into()));
    };
    let mut rows = Vec::new();
    for &n in &config.n {
        let grid = GridSpec::new(n)?;
        let i = grid.index_of_angle(theta).expect("validated");
        let truth = config.shape.support(grid.theta(i as isize));
        let losses = (0..config.replications as u64)
            .into_par_iter()
            .map(|rep| {
                let obs = observations(config, &grid, rep)?;
                Ok((select_bandwidth(&obs, i)?.value - truth).powi(2))
            })
            .collect::<Result<Vec<f64>>>()?;
        let (risk, stderr) = summarize(&losses);
        let oracle = oracle_kstar(&config.shape, &grid, i, config.sigma)?;
        rows.push(RiskRow {
            n,
            risk,
            stderr,
            benchmark: oracle.benchmark,
            failures: 0,
            max_realization_defect: None,
            contraction_violations: 0,
        });
    }
    Ok(finish_report(config, rows))
}

/// One replication of a set target.
#[derive(Clone, Debug)]
pub struct SetReplication {
    pub estimate: SetEstimate,
    pub loss: f64,
    /// Grid loss of the projected values minus that of the unprojected ones,
    /// both against the truth; non-positive for an exact projection.
    pub contraction_slack: f64,
}

pub fn run_set_replication(config: &SimulationConfig, grid: &GridSpec, replication: u64) -> Result<SetReplication> {
    let obs = observations(config, grid, replication)?;
    let truth = &config.shape;
    let (estimate, loss) = match config.target {
        Target::FixedDesign => {
            let est = estimate_set_khat(&obs)?;
            let loss = loss_fixed_design(truth, &est, grid);
            (est, loss)
        }
        Target::Integral { fine_factor, quadrature_points } => {
            let est = estimate_set_kprime(&obs, fine_factor)?;
            let loss = loss_integral(truth, &est, quadrature_points)?;
            (est, loss)
        }
        Target::Point { .. } => return Err(Error::InvalidInput("set risk needs a set target".into())),
    };
    let h = truth.sample(&estimate.grid);
    let sq = |v: &[f64]| v.iter().zip(&h).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / h.len() as f64;
    let projected = loss_fixed_design(truth, &estimate.body, &estimate.grid);
    let contraction_slack = projected - sq(&estimate.unprojected);
    Ok(SetReplication { estimate, loss, contraction_slack })
}

/// Set loss for the fixed-design or integral target. Replications whose
/// projection does not converge are counted in `failures` and left out of
/// the mean.
pub fn mc_set_risk(config: &SimulationConfig) -> Result<RiskReport> {
    config.validate()?;
    if matches!(config.target, Target::Point { .. }) {
        return Err(Error::InvalidInput("mc_set_risk needs a set target".into()));
    }
    let mut rows = Vec::new();
    for &n in &config.n {
        let grid = GridSpec::new(n)?;
        let outcomes: Vec<Result<SetReplication>> = (0..config.replications as u64)
            .into_par_iter()
            .map(|rep| run_set_replication(config, &grid, rep))
            .collect();
        let mut losses = Vec::with_capacity(outcomes.len());
        let (mut failures, mut violations, mut defect) = (0, 0, 0.0f64);
        for outcome in outcomes {
            match outcome {
                Ok(r) if r.estimate.converged => {
                    losses.push(r.loss);
                    defect = defect.max(r.estimate.realization_defect());
                    if r.contraction_slack > 1e-9 {
                        violations += 1;
                    }
                }
                Ok(_) | Err(Error::NotConverged { .. }) => failures += 1,
                Err(e) => return Err(e),
            }
        }
        if losses.is_empty() {
            return Err(Error::NotConverged { iterations: 0, residual: f64::NAN });
        }
        let (risk, stderr) = summarize(&losses);
        let benchmark = (1..=n)
            .map(|i| oracle_kstar(&config.shape, &grid, i, config.sigma).map(|p| p.benchmark))
            .sum::<Result<f64>>()?
            / n as f64;
        rows.push(RiskRow {
            n,
            risk,
            stderr,
            benchmark,
            failures,
            max_realization_defect: Some(defect),
            contraction_violations: violations,
        });
    }
    Ok(finish_report(config, rows))
}

/// Dispatches on the target kind.
pub fn mc_risk(config: &SimulationConfig) -> Result<RiskReport> {
    match config.target {
        Target::Point { .. } => mc_point_risk(config),
        _ => mc_set_risk(config),
    }
}

/// One line of the CSV report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub shape: String,
    pub n: usize,
    pub target: String,
    pub risk: f64,
    pub stderr: f64,
    pub benchmark: f64,
}

impl RiskReport {
    pub fn records(&self) -> Vec<ReportRecord> {
        self.rows
            .iter()
            .map(|r| ReportRecord {
                shape: self.shape.clone(),
                n: r.n,
                target: self.target.clone(),
                risk: r.risk,
                stderr: r.stderr,
                benchmark: r.benchmark,
            })
            .collect()
    }
}

pub fn write_report<W: std::io::Write>(writer: W, records: &[ReportRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_report<R: std::io::Read>(reader: R) -> Result<Vec<ReportRecord>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// Rate fits per `(shape, target)` group, in order of first appearance.
pub fn fit_report(records: &[ReportRecord]) -> Vec<(String, String, Result<RateFit>)> {
    let mut groups: Vec<(String, String, Vec<(f64, f64)>)> = Vec::new();
    for r in records {
        match groups.iter_mut().find(|g| g.0 == r.shape && g.1 == r.target) {
            Some(g) => g.2.push((r.n as f64, r.risk)),
            None => groups.push((r.shape.clone(), r.target.clone(), vec![(r.n as f64, r.risk)])),
        }
    }
    groups.into_iter().map(|(s, t, pts)| (s, t, fit_rate(&pts))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use approx::assert_abs_diff_eq;

    #[test]
    fn counter_access_matches_sequential_stream() {
        let g = GridSpec::new(64).unwrap();
        let origin = ConvexBody::singleton(Point::ORIGIN);
        for rep in [0, 1, 17] {
            let obs = generate(&origin, &g, 1.0, 99, rep).unwrap();
            for i in [0usize, 1, 33, 63] {
                assert_eq!(obs.values()[i], standard_normal(99, rep, i as u64));
            }
        }
        let a = generate(&origin, &g, 1.0, 99, 3).unwrap();
        let b = generate(&origin, &g, 1.0, 99, 3).unwrap();
        let c = generate(&origin, &g, 1.0, 99, 4).unwrap();
        assert_eq!(a.values(), b.values());
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn zero_noise_returns_support() {
        let g = GridSpec::new(32).unwrap();
        let ball = ConvexBody::ball(Point::new(0.2, 0.1), 0.7).unwrap();
        let obs = generate(&ball, &g, 0.0, 1, 0).unwrap();
        assert_eq!(obs.values(), ball.sample(&g).as_slice());
    }

    #[test]
    fn pure_noise_mean() {
        let n = 100_000;
        let g = GridSpec::new(n).unwrap();
        let origin = ConvexBody::singleton(Point::ORIGIN);
        let obs = generate(&origin, &g, 2.0, 5, 0).unwrap();
        let mean = obs.values().iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 * 2.0 / (n as f64).sqrt());
    }

    #[test]
    fn mad_conventions() {
        assert_eq!(estimate_sigma_mad(&[3.0; 8]).unwrap(), 0.0);
        // delta = [1, 5]: deviations from the midpoint are both 2
        let y = [0.0, 1.0, 0.0, 5.0];
        assert_abs_diff_eq!(estimate_sigma_mad(&y).unwrap(), (5.0f64 - 1.0).abs() / 2.0 / 1.349, epsilon = 1e-15);
        // odd number of differences uses the middle one; a trailing odd y is unused
        let y = [0.0, 1.0, 0.0, 2.0, 0.0, 10.0, 7.0];
        // delta = [1,2,10], median 2, deviations [1,0,8] -> 1
        assert_abs_diff_eq!(estimate_sigma_mad(&y).unwrap(), 1.0 / 1.349, epsilon = 1e-15);
        assert!(estimate_sigma_mad(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn mad_ratio_constant() {
        assert_abs_diff_eq!(MAD_EXPECTED_RATIO, 0.707_096_04, epsilon = 1e-7);
    }

    #[test]
    fn rate_fit_exact_powers() {
        let pts: Vec<(f64, f64)> = [64.0, 128.0, 256.0, 512.0].iter().map(|&n| (n, 3.0 / n)).collect();
        let fit = fit_rate(&pts).unwrap();
        assert_abs_diff_eq!(fit.slope, -1.0, epsilon = 1e-12);
        assert!(fit.stderr < 1e-10);
        let pts: Vec<(f64, f64)> = [64.0, 128.0, 256.0, 512.0, 1024.0].iter().map(|&n| (n, f64::powf(n, -0.8))).collect();
        assert_abs_diff_eq!(fit_rate(&pts).unwrap().slope, -0.8, epsilon = 1e-12);
        assert!(fit_rate(&pts[..3]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
    }

    #[test]
    fn config_round_trip_and_validation() {
        let text = r#"{
            "shape": {"type": "segment", "endpoints": [[0, 1], [0, -1]]},
            "n": [64, 128],
            "sigma": 1.0,
            "replications": 10,
            "seed": 7,
            "target": {"type": "point", "theta": 0.0}
        }"#;
        let config = SimulationConfig::from_json(text).unwrap();
        assert_eq!(config.slope_tolerance, DEFAULT_SLOPE_TOLERANCE);
        assert!(!config.estimate_sigma);
        let back = SimulationConfig::from_json(&serde_json::to_string(&config).unwrap()).unwrap();
        assert_eq!(back, config);
        assert!(SimulationConfig::from_json(&text.replace("[64, 128]", "[66]")).is_err());
        assert!(SimulationConfig::from_json(&text.replace("\"replications\": 10", "\"replications\": 0")).is_err());
        assert!(SimulationConfig::from_json(&text.replace("\"theta\": 0.0", "\"theta\": 0.1")).is_err());
        assert!(SimulationConfig::from_json(&text.replace("\"seed\": 7", "\"seed\": 7, \"extra\": 1")).is_err());
        let integral = text.replace(r#"{"type": "point", "theta": 0.0}"#, r#"{"type": "integral"}"#);
        let config = SimulationConfig::from_json(&integral).unwrap();
        assert_eq!(
            config.target,
            Target::Integral { fine_factor: DEFAULT_FINE_FACTOR, quadrature_points: DEFAULT_QUADRATURE_POINTS }
        );
    }

    #[test]
    fn report_csv_round_trip() {
        let records = vec![
            ReportRecord { shape: "ball".into(), n: 64, target: "fixed_design".into(), risk: 0.1, stderr: 0.01, benchmark: 0.05 },
            ReportRecord { shape: "ball".into(), n: 128, target: "fixed_design".into(), risk: 0.06, stderr: 0.01, benchmark: 0.03 },
        ];
        let mut buf = Vec::new();
        write_report(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("shape,n,target,risk,stderr,benchmark\n"));
        assert_eq!(read_report(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn small_point_study_is_deterministic() {
        let config = SimulationConfig {
            name: None,
            shape: ConvexBody::ball(Point::ORIGIN, 1.0).unwrap(),
            n: vec![64, 128, 256, 512],
            sigma: 0.5,
            replications: 20,
            seed: 3,
            target: Target::Point { theta: 0.0 },
            output: None,
            estimate_sigma: false,
            expected_slope: Some(-0.8),
            slope_tolerance: DEFAULT_SLOPE_TOLERANCE,
        };
        let a = mc_point_risk(&config).unwrap();
        let b = mc_point_risk(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 4);
        assert!(a.fit.is_some());
        assert!(a.rows.iter().all(|r| r.risk > 0.0 && r.benchmark > 0.0));
    }

    #[test]
    fn small_set_study_checks_invariants() {
        let base = SimulationConfig {
            name: Some("seg".into()),
            shape: ConvexBody::segment(Point::new(0.0, 1.0), Point::new(0.0, -1.0)),
            n: vec![32, 64],
            sigma: 0.3,
            replications: 8,
            seed: 1,
            target: Target::FixedDesign,
            output: None,
            estimate_sigma: true,
            expected_slope: None,
            slope_tolerance: DEFAULT_SLOPE_TOLERANCE,
        };
        for target in [Target::FixedDesign, Target::Integral { fine_factor: 4, quadrature_points: 4096 }] {
            let config = SimulationConfig { target, ..base.clone() };
            let report = mc_set_risk(&config).unwrap();
            for row in &report.rows {
                assert_eq!(row.failures, 0);
                assert_eq!(row.contraction_violations, 0);
                assert!(row.max_realization_defect.unwrap() < 1e-8);
            }
            assert!(report.fit.is_none());
        }
    }
}
