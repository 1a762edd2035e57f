//! Adaptive pointwise estimates of a square's support function from noisy
//! measurements, compared with the truth along a few directions.

use convex_support::adaptive_point::select_bandwidth;
use convex_support::geometry::{ConvexBody, GridSpec, Point, SupportFunction};
use convex_support::risk_lab::generate;

fn main() -> convex_support::Result<()> {
    let square = ConvexBody::polytope(vec![
        Point::new(1.0, 1.0),
        Point::new(-1.0, 1.0),
        Point::new(-1.0, -1.0),
        Point::new(1.0, -1.0),
    ])?;
    let grid = GridSpec::new(512)?;
    let obs = generate(&square, &grid, 0.2, 42, 0)?;

    println!("{:>5} {:>8} {:>8} {:>8} {:>4}", "i", "theta", "truth", "est", "k");
    for i in (16..=512).step_by(64) {
        let est = select_bandwidth(&obs, i)?;
        let theta = grid.theta(i as isize);
        println!(
            "{i:>5} {theta:>8.4} {:>8.4} {:>8.4} {:>4}",
            square.support(theta),
            est.value,
            est.chosen_k
        );
    }

    // The full trace shows why a bandwidth won.
    let est = select_bandwidth(&obs, 256)?;
    println!("\ntrace at i = 256 (edge normal, flat neighbourhood):");
    for s in &est.trace {
        println!("  k = {:>3}  U = {:.4}  delta = {:+.4}  criterion = {:.4}", s.k, s.upper, s.delta, s.criterion);
    }
    Ok(())
}
