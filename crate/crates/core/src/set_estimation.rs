//! Set estimators built from the pointwise estimates, and the two losses.
//!
//! `K_hat` projects the vector of pointwise estimates onto the support-vector
//! cone and intersects the resulting halfplanes. `K_hat'` replaces the
//! continuum projection of the sine-interpolated estimate by a Euclidean
//! projection on a grid `fine_factor` times finer; on a uniform grid the
//! rectangle rule for the integral is that Euclidean norm up to the factor
//! `2 pi / m`, so this is a quadrature approximation of the continuum
//! projection.

use std::f64::consts::PI;

use serde::Serialize;

use crate::adaptive_point::{estimate_all, Observations};
use crate::cone_projection::{project, ProjectionOptions, ProjectionResult};
use crate::error::{Error, Result};
use crate::geometry::{normalize, polytope_from_halfplanes, ConvexBody, GridSpec, SupportFunction};

/// Largest fine grid accepted by [`estimate_set_kprime`].
pub const MAX_FINE_GRID: usize = 1 << 16;
pub const DEFAULT_FINE_FACTOR: usize = 8;
/// Fewest quadrature points accepted by [`loss_integral`].
pub const MIN_QUADRATURE_POINTS: usize = 2048;

/// Sine interpolation of grid values: on `[theta_i, theta_{i+1}]`
///
/// `h(theta) = (sin(theta_{i+1} - theta) h_i + sin(theta - theta_i) h_{i+1}) / sin(2 pi / n)`,
///
/// with `theta_{n+1} = theta_1 + 2 pi`. Between two adjacent normals this is
/// the support function of the vertex where their support lines meet, so
/// sinusoids are reproduced exactly.
#[derive(Clone, Debug)]
pub struct InterpolatedSupport {
    values: Vec<f64>,
    grid: GridSpec,
}

impl InterpolatedSupport {
    pub fn new(values: Vec<f64>, grid: &GridSpec) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), actual: values.len() });
        }
        Ok(InterpolatedSupport { values, grid: grid.clone() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
}

/// Evaluates the sine interpolation of `base` (length `grid.n()`) at `theta`.
pub fn interpolate(base: &[f64], grid: &GridSpec, theta: f64) -> f64 {
    let step = grid.step();
    let t = (normalize(theta) + PI) / step;
    // theta lies in [theta_i, theta_{i+1}] with theta_0 identified with theta_n.
    let i = (t.floor() as isize).clamp(0, grid.n() as isize - 1);
    let offset = (t - i as f64) * step;
    let lo = base[grid.slot(i)];
    let hi = base[grid.slot(i + 1)];
    ((step - offset).sin() * lo + offset.sin() * hi) / step.sin()
}

impl SupportFunction for InterpolatedSupport {
    fn support(&self, theta: f64) -> f64 {
        interpolate(&self.values, &self.grid, theta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Projection of the grid estimates, then halfplane intersection.
    Khat,
    /// Fine-grid projection of the interpolated estimates.
    Kprime,
}

#[derive(Clone, Debug, Serialize)]
pub struct SetEstimate {
    pub provenance: Estimator,
    /// Grid on which the estimate is defined (the fine grid for `Kprime`).
    #[serde(skip)]
    pub grid: GridSpec,
    /// Values before projection: the pointwise estimates, or their
    /// interpolation on the fine grid.
    pub unprojected: Vec<f64>,
    /// Projected support values on `grid`.
    pub support_vector: Vec<f64>,
    /// Polygon cut out by the halfplanes of `support_vector`.
    pub body: ConvexBody,
    pub projection_iterations: usize,
    pub converged: bool,
}

impl SetEstimate {
    /// Largest disagreement between the polygon's support at the grid angles
    /// and the stored support values.
    pub fn realization_defect(&self) -> f64 {
        self.grid
            .thetas()
            .iter()
            .zip(&self.support_vector)
            .map(|(&t, &h)| (self.body.support(t) - h).abs())
            .fold(0.0, f64::max)
    }
}

impl SupportFunction for SetEstimate {
    fn support(&self, theta: f64) -> f64 {
        self.body.support(theta)
    }
}

fn realize(
    provenance: Estimator,
    grid: GridSpec,
    unprojected: Vec<f64>,
    projection: ProjectionResult,
) -> Result<SetEstimate> {
    let body = match polytope_from_halfplanes(&projection.projected, &grid) {
        Ok(body) => body,
        Err(Error::Infeasible { .. }) if !projection.converged => {
            return Err(Error::NotConverged {
                iterations: projection.iterations,
                residual: projection.residual,
            })
        }
        Err(e) => return Err(e),
    };
    Ok(SetEstimate {
        provenance,
        grid,
        unprojected,
        support_vector: projection.projected,
        body,
        projection_iterations: projection.iterations,
        converged: projection.converged,
    })
}

/// Pointwise estimates at every grid angle, projected onto the cone and
/// realized as a polygon.
pub fn estimate_set_khat(obs: &Observations) -> Result<SetEstimate> {
    estimate_set_khat_with(obs, &ProjectionOptions::default())
}

pub fn estimate_set_khat_with(obs: &Observations, options: &ProjectionOptions) -> Result<SetEstimate> {
    let pointwise: Vec<f64> = estimate_all(obs).into_iter().map(|e| e.value).collect();
    let projection = project(&pointwise, options)?;
    realize(Estimator::Khat, obs.grid().clone(), pointwise, projection)
}

/// Interpolates the pointwise estimates on a grid of `fine_factor * n`
/// angles, which contains the original grid, and projects there.
pub fn estimate_set_kprime(obs: &Observations, fine_factor: usize) -> Result<SetEstimate> {
    estimate_set_kprime_with(obs, fine_factor, &ProjectionOptions::default())
}

pub fn estimate_set_kprime_with(
    obs: &Observations,
    fine_factor: usize,
    options: &ProjectionOptions,
) -> Result<SetEstimate> {
    let n = obs.grid().n();
    if fine_factor < 4 {
        return Err(Error::InvalidInput(format!("fine_factor must be at least 4, got {fine_factor}")));
    }
    let m = fine_factor.checked_mul(n).filter(|&m| m <= MAX_FINE_GRID).ok_or_else(|| {
        Error::InvalidInput(format!("fine grid {fine_factor} x {n} exceeds {MAX_FINE_GRID} angles"))
    })?;
    let fine = GridSpec::new(m)?;
    let pointwise: Vec<f64> = estimate_all(obs).into_iter().map(|e| e.value).collect();
    let interpolated = InterpolatedSupport::new(pointwise, obs.grid())?;
    let values = interpolated.sample(&fine);
    let projection = project(&values, options)?;
    realize(Estimator::Kprime, fine, values, projection)
}

/// `(1/n) sum_i (h_a(theta_i) - h_b(theta_i))^2`.
pub fn loss_fixed_design<A, B>(a: &A, b: &B, grid: &GridSpec) -> f64
where
    A: SupportFunction + ?Sized,
    B: SupportFunction + ?Sized,
{
    let n = grid.n();
    (1..=n as isize)
        .map(|i| {
            let t = grid.theta(i);
            (a.support(t) - b.support(t)).powi(2)
        })
        .sum::<f64>()
        / n as f64
}

/// `integral over (-pi, pi] of (h_a - h_b)^2`, by the trapezoid rule on
/// `points` equally spaced angles (for a periodic integrand, the rectangle
/// rule). Support functions of polygons have kinks only in their
/// derivatives, so the error is `O(points^-2)`; for smooth integrands it
/// decays faster than any power.
pub fn loss_integral<A, B>(a: &A, b: &B, points: usize) -> Result<f64>
where
    A: SupportFunction + ?Sized,
    B: SupportFunction + ?Sized,
{
    if points < MIN_QUADRATURE_POINTS {
        return Err(Error::InvalidInput(format!(
            "integral loss needs at least {MIN_QUADRATURE_POINTS} points, got {points}"
        )));
    }
    let step = 2.0 * PI / points as f64;
    Ok((0..points)
        .map(|j| {
            let t = -PI + step * j as f64;
            (a.support(t) - b.support(t)).powi(2)
        })
        .sum::<f64>()
        * step)
}
