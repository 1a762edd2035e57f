use super::{ConvexBody, GridSpec, Point, Polygon};
use crate::error::{Error, Result};

/// Feasibility slack used when a residual is treated as zero.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Edges shorter than this (relative to the data scale) are merged away.
const EDGE_TOLERANCE: f64 = 1e-10;

/// Residuals `h_{i-1} + h_{i+1} - 2 cos(2 pi / n) h_i` of the cyclic
/// adjacent-triple constraints. Membership in the support-vector cone is
/// equivalent to all residuals being non-negative.
pub fn circle_convexity_residuals(h: &[f64], grid: &GridSpec) -> Result<Vec<f64>> {
    if h.len() != grid.n() {
        return Err(Error::LengthMismatch { expected: grid.n(), actual: h.len() });
    }
    Ok(cyclic_residuals(h, grid.cos_step()))
}

pub(crate) fn cyclic_residuals(h: &[f64], cos_step: f64) -> Vec<f64> {
    let n = h.len();
    (0..n)
        .map(|i| h[(i + n - 1) % n] + h[(i + 1) % n] - 2.0 * cos_step * h[i])
        .collect()
}

/// Intersection of the halfplanes `x cos theta_i + y sin theta_i <= h_i`.
///
/// Vertices come from intersecting consecutive support lines; an edge whose
/// length (residual over `sin(2 pi / n)`) is below tolerance is merged into
/// its successor. Fails if some residual is below `-1e-9` times the data
/// scale, since then the intersection does not attain every `h_i`.
pub fn polytope_from_halfplanes(h: &[f64], grid: &GridSpec) -> Result<ConvexBody> {
    let residuals = circle_convexity_residuals(h, grid)?;
    let n = grid.n();
    let scale = h.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if let Some((index, &residual)) = residuals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .filter(|(_, r)| **r < -RESIDUAL_TOLERANCE * scale)
    {
        return Err(Error::Infeasible { index: index + 1, residual });
    }

    let step = grid.step();
    let sin_step = step.sin();
    let thetas = grid.thetas();
    // vertex[i] lies on lines i and i+1 (0-based, cyclic).
    let vertex = |i: usize| -> Point {
        let j = (i + 1) % n;
        let (si, ci) = thetas[i].sin_cos();
        let (sj, cj) = thetas[j].sin_cos();
        Point::new((h[i] * sj - h[j] * si) / sin_step, (ci * h[j] - cj * h[i]) / sin_step)
    };
    let edge_len = |i: usize| residuals[i].max(0.0) / sin_step;

    let tol = EDGE_TOLERANCE * scale;
    let mut kept = Vec::new();
    let mut pending = 0.0;
    for i in 0..n {
        // vertex i starts edge i+1.
        pending += edge_len((i + 1) % n);
        if pending > tol {
            kept.push(vertex(i));
            pending = 0.0;
        }
    }

    Ok(match kept.len() {
        0 | 1 => {
            let (sx, sy) = (0..n).map(vertex).fold((0.0, 0.0), |(x, y), p| (x + p.x, y + p.y));
            ConvexBody::singleton(Point::new(sx / n as f64, sy / n as f64))
        }
        2 => ConvexBody::segment(kept[0], kept[1]),
        _ => ConvexBody::Polytope { vertices: Polygon::from_ccw_unchecked(kept) },
    })
}
