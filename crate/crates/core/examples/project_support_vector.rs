//! Projects a noisy vector onto the cone of support vectors with both
//! solvers, and checks the result against the brute-force oracle on a
//! small grid.

use convex_support::cone_projection::{membership, project, project_oracle, ProjectionOptions};
use convex_support::geometry::{ConvexBody, GridSpec, Point, SupportFunction};
use convex_support::risk_lab::standard_normal;

fn main() -> convex_support::Result<()> {
    let body = ConvexBody::half_disk(Point::ORIGIN, 1.0, 0.0)?;

    for n in [12usize, 16] {
        let v: Vec<f64> = (0..n).map(|i| standard_normal(1, n as u64, i as u64)).collect();
        let ipm = project(&v, &ProjectionOptions::default())?;
        let exact = project_oracle(&v)?;
        let gap = ipm.projected.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("n = {n:>2}: IPM vs enumeration max |diff| = {gap:.2e}");
    }

    // Dykstra needs on the order of n^4 cycles, so keep the grid small.
    let grid = GridSpec::new(32)?;
    let noisy: Vec<f64> = grid
        .thetas()
        .iter()
        .enumerate()
        .map(|(i, &t)| body.support(t) + 0.3 * standard_normal(2, 0, i as u64))
        .collect();
    println!("noisy vector in cone: {}", membership(&noisy, 1e-9));

    let ipm = project(&noisy, &ProjectionOptions::default())?;
    println!(
        "ipm:     {:>4} steps,  distance {:.4}, converged {}",
        ipm.iterations, ipm.distance, ipm.converged
    );
    let dyk = project(&noisy, &ProjectionOptions::dykstra())?;
    println!(
        "dykstra: {:>4} cycles, distance {:.4}, converged {}",
        dyk.iterations, dyk.distance, dyk.converged
    );
    let gap = ipm.projected.iter().zip(&dyk.projected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("solvers agree to {gap:.2e}; projection in cone: {}", membership(&ipm.projected, 1e-9));
    Ok(())
}
