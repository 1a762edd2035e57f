//! Planar convex bodies, their support functions, and the discrete
//! support-vector cone on a uniform angle grid.
//!
//! Every body here has an exact support function. The grid encoding of
//! circle-convexity uses the adjacent-triple inequalities
//! `h_{i-1} + h_{i+1} >= 2 cos(2 pi / n) h_i` (indices mod `n`); a vector
//! satisfying them is exactly the support vector of the polygon cut out by
//! the halfplanes `<x, u(theta_i)> <= h_i`.

mod angle;
mod body;
mod grid;
mod halfplane;

use std::f64::consts::PI;

use serde::Serialize;

pub use angle::{normalize, Angle};
pub use body::{ConvexBody, Point, Polygon, SupportFunction};
pub use grid::GridSpec;
pub use halfplane::{circle_convexity_residuals, polytope_from_halfplanes, RESIDUAL_TOLERANCE};

pub(crate) use halfplane::cyclic_residuals;

use crate::error::{Error, Result};

/// A length-`n` vector of support values that satisfies every cyclic
/// circle-convexity constraint to within `tol`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SupportVector(Vec<f64>);

impl SupportVector {
    pub fn new(values: Vec<f64>, grid: &GridSpec, tol: f64) -> Result<Self> {
        let residuals = circle_convexity_residuals(&values, grid)?;
        if let Some((i, &r)) = residuals.iter().enumerate().find(|(_, r)| **r < -tol) {
            return Err(Error::Infeasible { index: i + 1, residual: r });
        }
        Ok(SupportVector(values))
    }

    /// Samples the support function of `body` on the grid.
    pub fn of_body(body: &ConvexBody, grid: &GridSpec) -> Self {
        SupportVector(body.sample(grid))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_bracket_angle(phi: f64) -> Result<()> {
    if phi > 0.0 && phi < PI / 2.0 {
        Ok(())
    } else {
        Err(Error::BracketAngle(phi))
    }
}

/// `l(theta, phi) = cos(phi) (h(theta+phi) + h(theta-phi)) - (h(theta+2phi) + h(theta-2phi)) / 2`,
/// a lower bound on `h(theta)` for `0 < phi < pi/2`.
pub fn lower_bracket<S: SupportFunction + ?Sized>(body: &S, theta: f64, phi: f64) -> Result<f64> {
    check_bracket_angle(phi)?;
    let near = body.support(theta + phi) + body.support(theta - phi);
    let far = body.support(theta + 2.0 * phi) + body.support(theta - 2.0 * phi);
    Ok(phi.cos() * near - 0.5 * far)
}

/// `u(theta, phi) = (h(theta+phi) + h(theta-phi)) / (2 cos phi)`, an upper
/// bound on `h(theta)` for `0 < phi < pi/2`.
pub fn upper_bracket<S: SupportFunction + ?Sized>(body: &S, theta: f64, phi: f64) -> Result<f64> {
    check_bracket_angle(phi)?;
    let near = body.support(theta + phi) + body.support(theta - phi);
    Ok(near / (2.0 * phi.cos()))
}

/// Hausdorff distance approximated by the largest support gap over
/// `resolution` equally spaced angles. This never exceeds the true value.
pub fn hausdorff<A, B>(a: &A, b: &B, resolution: usize) -> Result<f64>
where
    A: SupportFunction + ?Sized,
    B: SupportFunction + ?Sized,
{
    if resolution < 360 {
        return Err(Error::InvalidInput(format!(
            "hausdorff resolution must be at least 360, got {resolution}"
        )));
    }
    Ok((0..resolution)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / resolution as f64 - PI;
            (a.support(t) - b.support(t)).abs()
        })
        .fold(0.0, f64::max))
}

/// Bodies used throughout tests, examples and the acceptance suite: one of
/// each variant, placed off the origin where that makes a difference.
pub fn library() -> Vec<(&'static str, ConvexBody)> {
    vec![
        ("singleton", ConvexBody::singleton(Point::new(0.3, -0.2))),
        ("ball", ConvexBody::ball(Point::ORIGIN, 1.0).expect("valid radius")),
        ("segment", ConvexBody::segment(Point::new(0.0, 1.0), Point::new(0.0, -1.0))),
        (
            "polytope",
            ConvexBody::polytope(vec![
                Point::new(1.0, -0.5),
                Point::new(0.8, 0.9),
                Point::new(-0.6, 1.0),
                Point::new(-1.1, -0.2),
                Point::new(-0.2, -1.0),
            ])
            .expect("valid pentagon"),
        ),
        ("half_disk", ConvexBody::half_disk(Point::ORIGIN, 1.0, -PI / 2.0).expect("valid radius")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn square() -> ConvexBody {
        ConvexBody::polytope(vec![
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
            Point::new(-1.0, -1.0),
        ])
        .unwrap()
    }

    #[test]
    fn ball_brackets_by_hand() {
        let r = 1.7;
        let ball = ConvexBody::ball(Point::ORIGIN, r).unwrap();
        for (theta, phi) in [(0.0, 0.3), (2.0, 1.2), (-1.0, 0.01)] {
            let phi: f64 = phi;
            assert_abs_diff_eq!(upper_bracket(&ball, theta, phi).unwrap(), r / phi.cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(
                lower_bracket(&ball, theta, phi).unwrap(),
                r * (2.0 * phi.cos() - 1.0),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn segment_upper_bracket_by_hand() {
        let seg = ConvexBody::segment(Point::new(0.0, 1.0), Point::new(0.0, -1.0));
        let u = upper_bracket(&seg, 0.0, PI / 6.0).unwrap();
        assert_abs_diff_eq!(u, (PI / 6.0).tan(), epsilon = 1e-15);
        assert_abs_diff_eq!(u, 0.577_350_269_189_625_8, epsilon = 1e-12);
    }

    #[test]
    fn brackets_tighten_as_phi_vanishes() {
        for (_, body) in library() {
            for theta in [-2.0, 0.0, 0.7] {
                let h = body.support(theta);
                let l = lower_bracket(&body, theta, 1e-7).unwrap();
                let u = upper_bracket(&body, theta, 1e-7).unwrap();
                assert!((u - h).abs() < 1e-6 && (h - l).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn bracket_angle_range() {
        let b = square();
        assert!(lower_bracket(&b, 0.0, 0.0).is_err());
        assert!(upper_bracket(&b, 0.0, PI / 2.0).is_err());
        assert!(upper_bracket(&b, 0.0, -0.1).is_err());
    }

    #[test]
    fn sandwich_on_fine_sweep() {
        for (name, body) in library().into_iter().chain([("square", square())]) {
            for a in 0..720 {
                let theta = 2.0 * PI * a as f64 / 720.0 - PI;
                let h = body.support(theta);
                for j in 1..=31 {
                    let phi = PI * j as f64 / 64.0;
                    let l = lower_bracket(&body, theta, phi).unwrap();
                    let u = upper_bracket(&body, theta, phi).unwrap();
                    assert!(l <= h + 1e-9 && h <= u + 1e-9, "{name} theta={theta} phi={phi}");
                }
            }
        }
    }

    #[test]
    fn hausdorff_examples() {
        let c = Point::new(0.2, 0.4);
        let a = ConvexBody::ball(c, 1.0).unwrap();
        let b = ConvexBody::ball(c, 1.6).unwrap();
        assert_abs_diff_eq!(hausdorff(&a, &b, 360).unwrap(), 0.6, epsilon = 1e-12);
        assert_eq!(hausdorff(&a, &a, 720).unwrap(), 0.0);
        let seg = ConvexBody::segment(Point::new(0.0, 1.0), Point::new(0.0, -1.0));
        let origin = ConvexBody::singleton(Point::ORIGIN);
        // the grid contains pi/2 when the resolution is divisible by 4
        assert_abs_diff_eq!(hausdorff(&seg, &origin, 360).unwrap(), 1.0, epsilon = 1e-12);
        assert!(hausdorff(&seg, &origin, 100).is_err());
    }

    #[test]
    fn sampled_supports_are_in_the_cone() {
        for n in [16, 64, 256, 1024] {
            let g = GridSpec::new(n).unwrap();
            for (_, body) in library().into_iter().chain([("square", square())]) {
                let r = circle_convexity_residuals(&body.sample(&g), &g).unwrap();
                assert!(r.iter().all(|v| *v >= -1e-12), "n={n} {}", body.kind());
            }
        }
    }

    #[test]
    fn halfplane_reconstruction_reproduces_grid_support() {
        for n in [16, 64, 256, 2048] {
            let g = GridSpec::new(n).unwrap();
            for (name, body) in library().into_iter().chain([("square", square())]) {
                let h = body.sample(&g);
                let rebuilt = polytope_from_halfplanes(&h, &g).unwrap();
                for (i, t) in g.thetas().into_iter().enumerate() {
                    assert!(
                        (rebuilt.support(t) - h[i]).abs() < 1e-8,
                        "{name} n={n} i={i}: {} vs {}",
                        rebuilt.support(t),
                        h[i]
                    );
                }
            }
        }
    }

    #[test]
    fn square_reconstruction_matches_exact_support() {
        let g = GridSpec::new(64).unwrap();
        let sq = square();
        let rebuilt = polytope_from_halfplanes(&sq.sample(&g), &g).unwrap();
        // Normals at multiples of pi/2 lie on the grid, so the polygon is the
        // square itself.
        assert_eq!(rebuilt.vertices().unwrap().len(), 4);
        for j in 0..720 {
            let t = 2.0 * PI * j as f64 / 720.0;
            let exact = t.cos().abs() + t.sin().abs();
            assert_abs_diff_eq!(rebuilt.support(t), exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn support_vector_validation() {
        let g = GridSpec::new(16).unwrap();
        assert!(SupportVector::new(vec![1.0; 16], &g, 1e-9).is_ok());
        let bad: Vec<f64> = (0..16).map(|i| (i % 2) as f64).collect();
        assert!(SupportVector::new(bad, &g, 1e-9).is_err());
    }

    proptest! {
        #[test]
        fn translation_equivariance(tx in -3.0f64..3.0, ty in -3.0f64..3.0, theta in -4.0f64..4.0) {
            let t = Point::new(tx, ty);
            for (_, body) in library().into_iter().chain([("square", square())]) {
                let moved = body.translated(t);
                let lhs = moved.support(theta);
                let rhs = body.support(theta) + t.project(theta);
                prop_assert!((lhs - rhs).abs() < 1e-12);
            }
        }

        #[test]
        fn polytope_support_is_vertex_max(theta in -4.0f64..4.0) {
            let sq = square();
            let by_hand = sq.vertices().unwrap().iter().map(|p| p.project(theta)).fold(f64::MIN, f64::max);
            prop_assert_eq!(sq.support(theta), by_hand);
        }
    }
}
