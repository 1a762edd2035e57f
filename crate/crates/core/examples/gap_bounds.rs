//! Checks the structural facts about the population gap on one body: the
//! brackets sandwich the support, each dyadic step enlarges the gap, and the
//! far-bracket bound holds.

use std::f64::consts::PI;

use convex_support::adaptive_point::{population_brackets, population_delta};
use convex_support::geometry::{ConvexBody, GridSpec, Point, SupportFunction};

fn main() -> convex_support::Result<()> {
    let body = ConvexBody::half_disk(Point::new(0.2, 0.1), 1.0, -PI / 2.0)?;
    let grid = GridSpec::new(256)?;
    let n = grid.n() as f64;
    let (mut sandwich, mut growth, mut far) = (0.0f64, f64::INFINITY, f64::INFINITY);

    for i in 1..=grid.n() {
        let theta = grid.theta(i as isize);
        let h = body.support(theta);
        for &k in grid.bandwidths() {
            let (lo, up) = population_brackets(&body, &grid, i, k)?;
            sandwich = sandwich.max(lo - h).max(h - up);
            let d = population_delta(&body, &grid, i, k)?;
            if d > 1e-12 {
                growth = growth.min(population_delta(&body, &grid, i, 2 * k)? / d);
            }
            let a = 4.0 * PI * k as f64 / n;
            let bound = (body.support(theta + a) + body.support(theta - a)) / (2.0 * a.cos()) - h;
            far = far.min(bound - d);
        }
    }
    println!("worst sandwich violation  {sandwich:.2e} (<= 0)");
    println!("smallest D_2k / D_k       {growth:.4} (>= 1.5)");
    println!("smallest far-bound slack  {far:.2e} (>= 0)");
    Ok(())
}
