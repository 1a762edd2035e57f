//! Population gap profiles and the oracle bandwidth for the library bodies,
//! plus the bracket that a pair of gap bounds gives for it.

use convex_support::adaptive_point::{bracket_kstar, oracle_kstar};
use convex_support::geometry::{library, GridSpec};

fn main() -> convex_support::Result<()> {
    let grid = GridSpec::new(1024)?;
    let i = grid.index_of_angle(0.0).expect("0 is a grid angle");
    let sigma = 0.5;

    for (name, body) in library() {
        let profile = oracle_kstar(&body, &grid, i, sigma)?;
        let gaps: Vec<String> = profile.deltas.iter().map(|(k, d)| format!("{k}:{:.2e}", d.max(0.0))).collect();
        println!("{name:<10} k* = {:>3}  benchmark = {:.3e}", profile.kstar, profile.benchmark);
        println!("           {}", gaps.join(" "));

        // Loosen the exact gaps by 25% either way; the bracket must still hold k*.
        // Flat neighbourhoods give gaps at rounding level, possibly negative.
        let exact: Vec<f64> = profile.deltas.iter().map(|p| p.1.max(0.0)).collect();
        let upper: Vec<f64> = exact.iter().map(|d| 1.25 * d).collect();
        let lower: Vec<f64> = exact.iter().map(|d| 0.75 * d).collect();
        let b = bracket_kstar(&upper, &lower, sigma, &grid)?;
        println!("           bracket [{}, {}]", b.lower, b.upper);
    }
    Ok(())
}
