//! Noise level from paired differences, on pure noise and on a smooth
//! signal, next to the value the estimator is expected to return.

use convex_support::geometry::{ConvexBody, GridSpec, Point};
use convex_support::risk_lab::{estimate_sigma_mad, generate, MAD_EXPECTED_RATIO};

fn main() -> convex_support::Result<()> {
    let noise_only = ConvexBody::singleton(Point::ORIGIN);
    let ball = ConvexBody::ball(Point::new(2.0, 1.0), 3.0)?;
    for n in [256usize, 4096, 65536] {
        let grid = GridSpec::new(n)?;
        for sigma in [0.1, 1.0] {
            let a = estimate_sigma_mad(generate(&noise_only, &grid, sigma, 42, 0)?.values())?;
            let b = estimate_sigma_mad(generate(&ball, &grid, sigma, 42, 0)?.values())?;
            println!(
                "n = {n:>5} sigma = {sigma:<3}  noise {a:.4}  ball {b:.4}  expected {:.4}",
                MAD_EXPECTED_RATIO * sigma
            );
        }
    }
    Ok(())
}
