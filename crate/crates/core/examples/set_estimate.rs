//! Set estimates of a triangle on the design grid and on a refined grid, and
//! their losses against the truth.

use convex_support::geometry::{hausdorff, ConvexBody, GridSpec, Point};
use convex_support::risk_lab::generate;
use convex_support::set_estimation::{
    estimate_set_khat, estimate_set_kprime, loss_fixed_design, loss_integral, DEFAULT_FINE_FACTOR,
};

fn main() -> convex_support::Result<()> {
    let triangle = ConvexBody::polytope(vec![Point::new(1.0, 0.0), Point::new(-0.5, 0.8), Point::new(-0.5, -0.8)])?;
    let grid = GridSpec::new(256)?;
    let obs = generate(&triangle, &grid, 0.1, 42, 0)?;

    let khat = estimate_set_khat(&obs)?;
    let kprime = estimate_set_kprime(&obs, DEFAULT_FINE_FACTOR)?;
    for (label, est) in [("design grid", &khat), ("fine grid", &kprime)] {
        println!(
            "{label:<12} converged {}  vertices {:>3}  fixed-design {:.2e}  integral {:.2e}  hausdorff {:.3}",
            est.converged,
            est.body.vertices().map_or(0, |v| v.len()),
            loss_fixed_design(est, &triangle, &grid),
            loss_integral(est, &triangle, 8192)?,
            hausdorff(est, &triangle, 4096)?,
        );
    }
    println!("polygon matches its support vector to {:.1e}", khat.realization_defect());
    Ok(())
}
