//! Pointwise estimation of `h(theta_i)` with data-driven bandwidth choice,
//! and the population quantities that benchmark it.
//!
//! For bandwidth `k` the estimator averages the upper brackets
//! `(Y_{i+j} + Y_{i-j}) / (2 cos(2 pi j / n))` over `j = 0..=k`. The gap
//! between averaged upper and lower brackets, `Delta_k`, controls the bias;
//! the selected bandwidth minimizes `(Delta_hat_k)_+ + 2 sigma / sqrt(k+1)`
//! over the dyadic grid.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{lower_bracket, upper_bracket, ConvexBody, GridSpec, SupportFunction};

/// `sqrt(6) - 2`: below this multiple of `sigma / sqrt(k+1)` the gap is
/// small enough that `k <= k_star`.
pub const SMALL_GAP: f64 = 0.449_489_742_783_178_1;
/// `6 (sqrt(2) - 1)`: above this multiple the gap forces `k >= k_star`.
pub const LARGE_GAP: f64 = 2.485_281_374_238_570_3;

/// Noisy support measurements `y_i = h(theta_i) + sigma z_i` on a grid.
#[derive(Clone, Debug)]
pub struct Observations {
    y: Vec<f64>,
    sigma: f64,
    grid: GridSpec,
}

impl Observations {
    pub fn new(y: Vec<f64>, sigma: f64, grid: GridSpec) -> Result<Self> {
        if y.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), actual: y.len() });
        }
        check_sigma(sigma)?;
        if let Some(bad) = y.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite observation {bad}")));
        }
        Ok(Observations { y, sigma, grid })
    }

    /// `Y_i` for any integer `i`, resolved cyclically onto `1..=n`.
    #[inline]
    pub fn at(&self, i: isize) -> f64 {
        self.y[self.grid.slot(i)]
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Observations::new(self.y.clone(), sigma, self.grid.clone())
    }
}

/// Unbiased estimates of `L_k(theta_i)`, `U_k(theta_i)` and their gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleStatistics {
    pub lower: f64,
    pub upper: f64,
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandwidthScore {
    pub k: usize,
    pub upper: f64,
    pub delta: f64,
    /// `(delta)_+ + 2 sigma / sqrt(k+1)`
    pub criterion: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointEstimate {
    pub index: usize,
    pub value: f64,
    pub chosen_k: usize,
    pub trace: Vec<BandwidthScore>,
}

/// Population gap profile at one grid angle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleProfile {
    pub index: usize,
    /// `(k, Delta_k(theta_i))` for every `k` in the bandwidth grid.
    pub deltas: Vec<(usize, f64)>,
    pub kstar: usize,
    /// `sigma^2 / (k_star + 1)`
    pub benchmark: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KStarBracket {
    /// Largest `k` whose upper gap bound is below `(sqrt 6 - 2) sigma / sqrt(k+1)`.
    pub lower: usize,
    /// Smallest `k` whose lower gap bound exceeds `6 (sqrt 2 - 1) sigma / sqrt(k+1)`.
    pub upper: usize,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("sigma must be finite and non-negative, got {sigma}")))
    }
}

#[inline]
fn penalty(sigma: f64, k: usize) -> f64 {
    2.0 * sigma / ((k + 1) as f64).sqrt()
}

/// Bandwidths beyond `n/8` push the lower bracket past a quarter turn.
fn check_bandwidth(grid: &GridSpec, k: usize) -> Result<()> {
    if 8 * k > grid.n() {
        Err(Error::InvalidBandwidth { k, n: grid.n() })
    } else {
        Ok(())
    }
}

/// First index attaining the minimum; NaNs never win.
pub(crate) fn first_argmin(values: impl IntoIterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        match best {
            Some((_, b)) if !(v < b) => {}
            _ if v.is_nan() => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// Running sums of the bracket terms, reported at each requested bandwidth.
/// `value(d)` must return the observation (or support value) `d` grid steps
/// away from the target index.
fn accumulate(
    grid: &GridSpec,
    ks: &[usize],
    value: impl Fn(isize) -> f64,
) -> Vec<SampleStatistics> {
    let n = grid.n() as f64;
    let mut out = Vec::with_capacity(ks.len());
    let (mut sum_l, mut sum_u, mut sum_d) = (0.0, 0.0, 0.0);
    let kmax = ks.iter().copied().max().unwrap_or(0);
    let mut next = 0;
    for j in 0..=kmax {
        let (c1, c2) = if j == 0 {
            (1.0, 1.0)
        } else {
            ((2.0 * PI * j as f64 / n).cos(), (4.0 * PI * j as f64 / n).cos())
        };
        let jj = j as isize;
        let near = if j == 0 { 2.0 * value(0) } else { value(jj) + value(-jj) };
        let far = if j == 0 { 2.0 * value(0) } else { value(2 * jj) + value(-2 * jj) };
        sum_u += near / (2.0 * c1);
        sum_l += c1 * near - 0.5 * far;
        sum_d += if j == 0 { 0.0 } else { 0.5 * far - (c2 / c1) * 0.5 * near };
        while next < ks.len() && ks[next] == j {
            let m = (j + 1) as f64;
            out.push(SampleStatistics { lower: sum_l / m, upper: sum_u / m, delta: sum_d / m });
            next += 1;
        }
    }
    out
}

/// `L_hat_k`, `U_hat_k` and `Delta_hat_k` at index `i` (1-based), for
/// `0 <= k <= n/8`.
///
/// `Delta_hat_k` is accumulated directly from its own closed form rather
/// than as `U_hat - L_hat`.
pub fn sample_statistics(obs: &Observations, i: usize, k: usize) -> Result<SampleStatistics> {
    let grid = obs.grid();
    grid.check_index(i)?;
    check_bandwidth(grid, k)?;
    let i = i as isize;
    Ok(accumulate(grid, &[k], |d| obs.at(i + d))[0])
}

/// The adaptive estimate at index `i`: `U_hat` at the smallest minimizer of
/// `(Delta_hat_k)_+ + 2 sigma / sqrt(k+1)` over the bandwidth grid.
pub fn select_bandwidth(obs: &Observations, i: usize) -> Result<PointEstimate> {
    let grid = obs.grid();
    grid.check_index(i)?;
    let ks = grid.bandwidths();
    let at = i as isize;
    let stats = accumulate(grid, ks, |d| obs.at(at + d));
    let trace: Vec<BandwidthScore> = ks
        .iter()
        .zip(&stats)
        .map(|(&k, s)| BandwidthScore {
            k,
            upper: s.upper,
            delta: s.delta,
            criterion: s.delta.max(0.0) + penalty(obs.sigma(), k),
        })
        .collect();
    let best = first_argmin(trace.iter().map(|t| t.criterion)).expect("bandwidth grid is non-empty");
    Ok(PointEstimate { index: i, value: trace[best].upper, chosen_k: trace[best].k, trace })
}

/// Adaptive estimates at every grid index, in index order.
pub fn estimate_all(obs: &Observations) -> Vec<PointEstimate> {
    (1..=obs.grid().n())
        .map(|i| select_bandwidth(obs, i).expect("index in range"))
        .collect()
}

/// Population gap `Delta_k(theta_i)` from its direct expression in terms of
/// `h` at `theta_i +- 2 pi j / n` and `theta_i +- 4 pi j / n`.
pub fn population_delta<S: SupportFunction + ?Sized>(
    body: &S,
    grid: &GridSpec,
    i: usize,
    k: usize,
) -> Result<f64> {
    grid.check_index(i)?;
    check_bandwidth(grid, k)?;
    let n = grid.n() as f64;
    let theta = grid.theta(i as isize);
    let sum: f64 = (1..=k)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / n;
            let far = 0.5 * (body.support(theta + 2.0 * a) + body.support(theta - 2.0 * a));
            let near = 0.5 * (body.support(theta + a) + body.support(theta - a));
            far - (2.0 * a).cos() / a.cos() * near
        })
        .sum();
    Ok(sum / (k + 1) as f64)
}

/// `(L_k(theta_i), U_k(theta_i))`: averages of the lower and upper
/// brackets at `phi = 2 pi j / n`, `j = 0..=k`, where the `j = 0` term is
/// `h(theta_i)` itself.
pub fn population_brackets<S: SupportFunction + ?Sized>(
    body: &S,
    grid: &GridSpec,
    i: usize,
    k: usize,
) -> Result<(f64, f64)> {
    grid.check_index(i)?;
    check_bandwidth(grid, k)?;
    let theta = grid.theta(i as isize);
    let h0 = body.support(theta);
    let (mut lo, mut up) = (h0, h0);
    for j in 1..=k {
        let phi = grid.step() * j as f64;
        lo += lower_bracket(body, theta, phi)?;
        up += upper_bracket(body, theta, phi)?;
    }
    let m = (k + 1) as f64;
    Ok((lo / m, up / m))
}

/// The population-optimal bandwidth `k_star(i)`, the smallest minimizer of
/// `Delta_k + 2 sigma / sqrt(k+1)` over the bandwidth grid.
pub fn oracle_kstar<S: SupportFunction + ?Sized>(
    body: &S,
    grid: &GridSpec,
    i: usize,
    sigma: f64,
) -> Result<OracleProfile> {
    check_sigma(sigma)?;
    let deltas = grid
        .bandwidths()
        .iter()
        .map(|&k| population_delta(body, grid, i, k).map(|d| (k, d)))
        .collect::<Result<Vec<_>>>()?;
    let best = first_argmin(deltas.iter().map(|&(k, d)| d + penalty(sigma, k)))
        .expect("bandwidth grid is non-empty");
    let kstar = deltas[best].0;
    Ok(OracleProfile { index: i, deltas, kstar, benchmark: sigma * sigma / (kstar + 1) as f64 })
}

/// Brackets `k_star` from bounds `g_k <= Delta_k <= f_k` given per element
/// of the bandwidth grid (same order as [`GridSpec::bandwidths`]).
///
/// If no `k` satisfies the upper-bound condition the lower end is 0; if
/// none satisfies the lower-bound condition the upper end is the largest
/// bandwidth.
pub fn bracket_kstar(f: &[f64], g: &[f64], sigma: f64, grid: &GridSpec) -> Result<KStarBracket> {
    let ks = grid.bandwidths();
    for v in [f, g] {
        if v.len() != ks.len() {
            return Err(Error::LengthMismatch { expected: ks.len(), actual: v.len() });
        }
    }
    if let Some(pos) = f.iter().zip(g).position(|(fk, gk)| gk > fk) {
        return Err(Error::InvalidInput(format!(
            "lower bound exceeds upper bound at k = {}",
            ks[pos]
        )));
    }
    let scaled = |k: usize| sigma / ((k + 1) as f64).sqrt();
    let lower = ks
        .iter()
        .zip(f)
        .filter(|(&k, &fk)| fk < SMALL_GAP * scaled(k))
        .map(|(&k, _)| k)
        .max()
        .unwrap_or(0);
    let upper = ks
        .iter()
        .zip(g)
        .find(|(&k, &gk)| gk > LARGE_GAP * scaled(k))
        .map(|(&k, _)| k)
        .unwrap_or_else(|| grid.max_bandwidth());
    Ok(KStarBracket { lower, upper })
}

/// Maximal arc `[phi1, phi2]` around `theta` on which a single point of the
/// body generates the support function. See [`ConvexBody::generating_arc`].
pub fn exposed_arc(body: &ConvexBody, theta: f64) -> (f64, f64) {
    body.generating_arc(theta)
}

/// `min(theta - phi1, phi2 - theta, pi)`, the flat-arc half-width that
/// drives the lower bound `k_star(i) >= c n * width`.
pub fn flat_arc_width(body: &ConvexBody, theta: f64) -> f64 {
    let (a, b) = exposed_arc(body, theta);
    (theta - a).min(b - theta).min(PI)
}
