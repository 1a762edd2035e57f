//! A small Monte Carlo study: pointwise risk of the adaptive estimator at
//! the segment's edge normal over a ladder of grid sizes, with the fitted
//! log-log rate.

use convex_support::geometry::{ConvexBody, Point};
use convex_support::risk_lab::{mc_risk, SimulationConfig, Target};

fn main() -> convex_support::Result<()> {
    let config = SimulationConfig {
        name: Some("segment".into()),
        shape: ConvexBody::segment(Point::new(0.0, 1.0), Point::new(0.0, -1.0)),
        n: vec![64, 128, 256, 512, 1024],
        sigma: 1.0,
        replications: 200,
        seed: 42,
        target: Target::Point { theta: std::f64::consts::FRAC_PI_2 },
        output: None,
        estimate_sigma: false,
        expected_slope: Some(-1.0),
        slope_tolerance: 0.15,
    };
    let report = mc_risk(&config)?;
    println!("{:>6} {:>10} {:>10} {:>10}", "n", "risk", "stderr", "benchmark");
    for row in &report.rows {
        println!("{:>6} {:>10.3e} {:>10.2e} {:>10.3e}", row.n, row.risk, row.stderr, row.benchmark);
    }
    if let Some(fit) = report.fit {
        println!("slope {:.3} +/- {:.3}, within band: {:?}", fit.slope, fit.stderr, report.slope_within_band());
    }

    // The same study as a JSON config, as the CLI reads it.
    println!("\n{}", serde_json::to_string_pretty(&config).expect("config serializes"));
    Ok(())
}
