use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::angle::normalize;
use crate::error::{Error, Result};

/// Evaluation of a support function `h(theta) = max_{x in K} <x, (cos theta, sin theta)>`.
///
/// Implemented by exact bodies as well as by estimates, so losses and
/// distances accept either.
pub trait SupportFunction {
    fn support(&self, theta: f64) -> f64;

    /// Support values on the angles of `grid`, in index order.
    fn sample(&self, grid: &super::GridSpec) -> Vec<f64> {
        (1..=grid.n() as isize).map(|i| self.support(grid.theta(i))).collect()
    }
}

impl<T: SupportFunction + ?Sized> SupportFunction for &T {
    fn support(&self, theta: f64) -> f64 {
        (**self).support(theta)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Value of the linear form `x cos theta + y sin theta`.
    #[inline]
    pub fn project(self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.x * c + self.y * s
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Vertices of a convex polygon in counterclockwise order.
///
/// Built either through [`Polygon::new`], which checks strict convex position,
/// or internally from a halfplane intersection whose ordering is known.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates at least three vertices, counterclockwise, no three collinear.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidBody(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidBody("non-finite vertex".into()));
        }
        let scale = vertices.iter().map(|p| p.norm()).fold(1.0, f64::max);
        let m = vertices.len();
        let mut winding = 0.0;
        for i in 0..m {
            let a = vertices[i];
            let b = vertices[(i + 1) % m];
            let c = vertices[(i + 2) % m];
            if (b - a).cross(c - b) <= 1e-12 * scale * scale {
                return Err(Error::InvalidBody(format!(
                    "vertices {}, {}, {} are not in strictly convex counterclockwise position",
                    i,
                    (i + 1) % m,
                    (i + 2) % m
                )));
            }
            // Exterior angle of the turn at b.
            let (u, v) = (b - a, c - b);
            winding += u.cross(v).atan2(u.dot(v));
        }
        // A star polygon also turns left everywhere but winds more than once.
        if (winding - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::InvalidBody("vertex sequence winds more than once".into()));
        }
        Ok(Polygon { vertices })
    }

    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn translated(&self, t: Point) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|&p| p + t).collect() }
    }
}

/// A planar compact convex set with a closed-form support function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", try_from = "ShapeSpec")]
pub enum ConvexBody {
    Singleton { point: Point },
    Ball { center: Point, radius: f64 },
    Segment { endpoints: [Point; 2] },
    Polytope { vertices: Polygon },
    /// `{x : |x - center| <= radius, <x - center, (cos axis, sin axis)> >= 0}`.
    HalfDisk { center: Point, radius: f64, axis: f64 },
}

/// Wire form of [`ConvexBody`]; routed through the validating constructors.
#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum ShapeSpec {
    Singleton { point: Point },
    Ball { #[serde(default)] center: Point, radius: f64 },
    Segment { endpoints: [Point; 2] },
    Polytope { vertices: Vec<Point> },
    HalfDisk { #[serde(default)] center: Point, radius: f64, axis: f64 },
}

impl TryFrom<ShapeSpec> for ConvexBody {
    type Error = Error;

    fn try_from(spec: ShapeSpec) -> Result<Self> {
        match spec {
            ShapeSpec::Singleton { point } => Ok(ConvexBody::singleton(point)),
            ShapeSpec::Ball { center, radius } => ConvexBody::ball(center, radius),
            ShapeSpec::Segment { endpoints: [a, b] } => Ok(ConvexBody::segment(a, b)),
            ShapeSpec::Polytope { vertices } => ConvexBody::polytope(vertices),
            ShapeSpec::HalfDisk { center, radius, axis } => {
                ConvexBody::half_disk(center, radius, axis)
            }
        }
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidBody(format!("radius must be finite and >= 0, got {radius}")))
    }
}

impl ConvexBody {
    pub fn singleton(point: Point) -> Self {
        ConvexBody::Singleton { point }
    }

    /// A zero radius collapses to a singleton.
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(if radius == 0.0 {
            ConvexBody::Singleton { point: center }
        } else {
            ConvexBody::Ball { center, radius }
        })
    }

    /// Coincident endpoints collapse to a singleton.
    pub fn segment(a: Point, b: Point) -> Self {
        if a == b {
            ConvexBody::Singleton { point: a }
        } else {
            ConvexBody::Segment { endpoints: [a, b] }
        }
    }

    /// One or two vertices produce a singleton or segment; three or more must
    /// be in strictly convex counterclockwise position.
    pub fn polytope(vertices: Vec<Point>) -> Result<Self> {
        match vertices.len() {
            0 => Err(Error::InvalidBody("polytope without vertices".into())),
            1 => Ok(ConvexBody::singleton(vertices[0])),
            2 => Ok(ConvexBody::segment(vertices[0], vertices[1])),
            _ => Ok(ConvexBody::Polytope { vertices: Polygon::new(vertices)? }),
        }
    }

    pub fn half_disk(center: Point, radius: f64, axis: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(if radius == 0.0 {
            ConvexBody::Singleton { point: center }
        } else {
            ConvexBody::HalfDisk { center, radius, axis: normalize(axis) }
        })
    }

    /// Short lowercase name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            ConvexBody::Singleton { .. } => "singleton",
            ConvexBody::Ball { .. } => "ball",
            ConvexBody::Segment { .. } => "segment",
            ConvexBody::Polytope { .. } => "polytope",
            ConvexBody::HalfDisk { .. } => "half_disk",
        }
    }

    pub fn translated(&self, t: Point) -> ConvexBody {
        match self {
            ConvexBody::Singleton { point } => ConvexBody::Singleton { point: *point + t },
            ConvexBody::Ball { center, radius } => {
                ConvexBody::Ball { center: *center + t, radius: *radius }
            }
            ConvexBody::Segment { endpoints: [a, b] } => {
                ConvexBody::Segment { endpoints: [*a + t, *b + t] }
            }
            ConvexBody::Polytope { vertices } => {
                ConvexBody::Polytope { vertices: vertices.translated(t) }
            }
            ConvexBody::HalfDisk { center, radius, axis } => {
                ConvexBody::HalfDisk { center: *center + t, radius: *radius, axis: *axis }
            }
        }
    }

    /// Radius of the smallest origin-centred disk containing the body.
    pub fn circumradius(&self) -> f64 {
        match self {
            ConvexBody::Singleton { point } => point.norm(),
            ConvexBody::Ball { center, radius } | ConvexBody::HalfDisk { center, radius, .. } => {
                center.norm() + radius
            }
            ConvexBody::Segment { endpoints: [a, b] } => a.norm().max(b.norm()),
            ConvexBody::Polytope { vertices } => {
                vertices.vertices().iter().map(|p| p.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// Extreme points, when the body has finitely many.
    pub fn vertices(&self) -> Option<Vec<Point>> {
        match self {
            ConvexBody::Singleton { point } => Some(vec![*point]),
            ConvexBody::Segment { endpoints } => Some(endpoints.to_vec()),
            ConvexBody::Polytope { vertices } => Some(vertices.vertices().to_vec()),
            ConvexBody::Ball { .. } | ConvexBody::HalfDisk { .. } => None,
        }
    }

    /// The maximal arc `[phi1, phi2]` containing `theta` on which the support
    /// function is generated by a single point of the body.
    ///
    /// When `theta` is the normal of an edge (two extreme points tie) or the
    /// boundary is strictly curved at `theta`, the degenerate arc
    /// `(theta, theta)` is returned. The returned endpoints are unwrapped so
    /// that `phi1 <= theta <= phi2`.
    pub fn generating_arc(&self, theta: f64) -> (f64, f64) {
        match self {
            ConvexBody::Singleton { .. } => (theta - PI, theta + PI),
            ConvexBody::Ball { .. } => (theta, theta),
            ConvexBody::HalfDisk { axis, .. } => {
                // Corners sit at axis +- pi/2; each generates a quarter turn
                // on the flat (diameter) side.
                let rel = (theta - axis).rem_euclid(2.0 * PI);
                let tol = 1e-12;
                if rel > PI / 2.0 + tol && rel < PI - tol {
                    (theta - (rel - PI / 2.0), theta + (PI - rel))
                } else if rel > PI + tol && rel < 1.5 * PI - tol {
                    (theta - (rel - PI), theta + (1.5 * PI - rel))
                } else {
                    (theta, theta)
                }
            }
            ConvexBody::Segment { endpoints } => vertex_arc(endpoints, theta),
            ConvexBody::Polytope { vertices } => vertex_arc(vertices.vertices(), theta),
        }
    }
}

/// Arc of normals for the vertex maximizing the linear form at `theta`, for a
/// counterclockwise vertex cycle (two vertices form a degenerate 2-cycle).
fn vertex_arc(vertices: &[Point], theta: f64) -> (f64, f64) {
    let m = vertices.len();
    let values: Vec<f64> = vertices.iter().map(|p| p.project(theta)).collect();
    let (best, &top) = values
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
    let scale = vertices.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let tie = values.iter().enumerate().any(|(i, &v)| i != best && top - v <= 1e-12 * scale);
    if tie {
        return (theta, theta);
    }
    let prev = vertices[(best + m - 1) % m];
    let here = vertices[best];
    let next = vertices[(best + 1) % m];
    let normal = |a: Point, b: Point| {
        let d = b - a;
        (-d.x).atan2(d.y)
    };
    let phi1 = normal(prev, here);
    let phi2 = normal(here, next);
    let back = (theta - phi1).rem_euclid(2.0 * PI);
    let ahead = (phi2 - theta).rem_euclid(2.0 * PI);
    (theta - back, theta + ahead)
}

impl SupportFunction for ConvexBody {
    fn support(&self, theta: f64) -> f64 {
        match self {
            ConvexBody::Singleton { point } => point.project(theta),
            ConvexBody::Ball { center, radius } => center.project(theta) + radius,
            ConvexBody::Segment { endpoints: [a, b] } => a.project(theta).max(b.project(theta)),
            ConvexBody::Polytope { vertices } => {
                let (s, c) = theta.sin_cos();
                vertices
                    .vertices()
                    .iter()
                    .map(|p| p.x * c + p.y * s)
                    .fold(f64::NEG_INFINITY, f64::max)
            }
            ConvexBody::HalfDisk { center, radius, axis } => {
                let rel = theta - axis;
                let extent = if rel.cos() >= 0.0 { *radius } else { radius * rel.sin().abs() };
                center.project(theta) + extent
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

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
    fn closed_forms() {
        let (x1, x2) = (0.7, -1.3);
        let p = ConvexBody::singleton(Point::new(x1, x2));
        let b = ConvexBody::ball(Point::new(x1, x2), 2.0).unwrap();
        let s = ConvexBody::segment(Point::new(0.0, 3.0), Point::new(0.0, -3.0));
        for t in [-3.0, -1.0, 0.0, 0.4, 2.5, PI] {
            assert_abs_diff_eq!(p.support(t), x1 * t.cos() + x2 * t.sin(), epsilon = 1e-15);
            assert_abs_diff_eq!(b.support(t), x1 * t.cos() + x2 * t.sin() + 2.0, epsilon = 1e-15);
            assert_abs_diff_eq!(s.support(t), 3.0 * t.sin().abs(), epsilon = 1e-15);
        }
    }

    #[test]
    fn half_disk_matches_half_ball_example() {
        let hd = ConvexBody::half_disk(Point::ORIGIN, 1.0, -PI / 2.0).unwrap();
        assert_abs_diff_eq!(hd.support(PI / 3.0), 0.5, epsilon = 1e-15);
        for t in [-PI + 1e-9, -2.0, -1.0, -1e-9] {
            assert_abs_diff_eq!(hd.support(t), 1.0, epsilon = 1e-12);
        }
        for t in [0.1, 1.0, 2.0, 3.0] {
            assert_abs_diff_eq!(hd.support(t), t.cos().abs(), epsilon = 1e-15);
        }
    }

    #[test]
    fn degenerate_bodies_collapse() {
        assert_eq!(ConvexBody::ball(Point::new(1.0, 2.0), 0.0).unwrap().kind(), "singleton");
        let p = Point::new(0.5, 0.5);
        assert_eq!(ConvexBody::segment(p, p).kind(), "singleton");
        assert_eq!(ConvexBody::polytope(vec![p, Point::ORIGIN]).unwrap().kind(), "segment");
        assert!(ConvexBody::ball(Point::ORIGIN, -1.0).is_err());
    }

    #[test]
    fn two_vertex_polytope_is_segment_support() {
        let a = Point::new(-0.4, 1.0);
        let b = Point::new(1.1, 0.3);
        let poly = ConvexBody::polytope(vec![a, b]).unwrap();
        let seg = ConvexBody::segment(a, b);
        for j in 0..720 {
            let t = 2.0 * PI * j as f64 / 720.0;
            assert_eq!(poly.support(t), seg.support(t));
        }
    }

    #[test]
    fn polygon_validation() {
        // clockwise
        assert!(Polygon::new(vec![
            Point::new(1.0, 1.0),
            Point::new(1.0, -1.0),
            Point::new(-1.0, -1.0)
        ])
        .is_err());
        // collinear triple
        assert!(Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 1.0)
        ])
        .is_err());
        // pentagram ordering winds twice
        let star: Vec<Point> = (0..5)
            .map(|j| {
                let a = 2.0 * PI * (2 * j) as f64 / 5.0;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        assert!(Polygon::new(star).is_err());
        assert!(matches!(square(), ConvexBody::Polytope { .. }));
    }

    #[test]
    fn shape_json_round_trip() {
        let b: ConvexBody =
            serde_json::from_str(r#"{"type":"ball","center":[0,0],"radius":1.0}"#).unwrap();
        assert_eq!(b, ConvexBody::ball(Point::ORIGIN, 1.0).unwrap());
        let hd: ConvexBody =
            serde_json::from_str(r#"{"type":"half_disk","radius":1.0,"axis":-1.5707963267948966}"#)
                .unwrap();
        assert_eq!(hd.kind(), "half_disk");
        let sq = square();
        let text = serde_json::to_string(&sq).unwrap();
        assert_eq!(serde_json::from_str::<ConvexBody>(&text).unwrap(), sq);
        let bad = serde_json::from_str::<ConvexBody>(r#"{"type":"ball","radius":-2}"#);
        assert!(bad.is_err());
        let deg: ConvexBody =
            serde_json::from_str(r#"{"type":"segment","endpoints":[[1,1],[1,1]]}"#).unwrap();
        assert_eq!(deg.kind(), "singleton");
    }

    #[test]
    fn arcs() {
        let r = 2.0;
        let seg = ConvexBody::segment(Point::new(0.0, r), Point::new(0.0, -r));
        let (a, b) = seg.generating_arc(PI / 2.0);
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, PI, epsilon = 1e-12);
        assert_eq!(seg.generating_arc(0.0), (0.0, 0.0));

        let diamond = ConvexBody::polytope(vec![
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, -1.0),
        ])
        .unwrap();
        let (a, b) = diamond.generating_arc(0.0);
        assert_abs_diff_eq!(a, -PI / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, PI / 4.0, epsilon = 1e-12);

        // Axis-aligned square: theta = 0 is an edge normal.
        assert_eq!(square().generating_arc(0.0), (0.0, 0.0));
        let (a, b) = square().generating_arc(PI / 4.0);
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, PI / 2.0, epsilon = 1e-12);
        // Unwrapping across the branch cut at pi.
        let (a, b) = square().generating_arc(-3.0 * PI / 4.0);
        assert_abs_diff_eq!(a, -PI, epsilon = 1e-12);
        assert_abs_diff_eq!(b, -PI / 2.0, epsilon = 1e-12);

        let hd = ConvexBody::half_disk(Point::ORIGIN, 1.0, -PI / 2.0).unwrap();
        let (a, b) = hd.generating_arc(PI / 2.0);
        assert_eq!((a, b), (PI / 2.0, PI / 2.0));
        let (a, b) = hd.generating_arc(PI / 4.0);
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, PI / 2.0, epsilon = 1e-12);
    }
}
