use std::f64::consts::PI;

use convex_support::adaptive_point::{
    bracket_kstar, oracle_kstar, population_brackets, population_delta, LARGE_GAP, SMALL_GAP,
};
use convex_support::geometry::{library, ConvexBody, GridSpec, Point, SupportFunction};
use proptest::prelude::*;

/// Bodies with random placement: polygons inscribed in a circle at sorted
/// random angles, balls, segments and half-disks.
fn body() -> impl Strategy<Value = ConvexBody> {
    let center = (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y)| Point::new(x, y));
    let polygon = (center.clone(), 0.2..2.0f64, prop::collection::vec(0.0..1.0f64, 3..9)).prop_filter_map(
        "vertices too close",
        |(c, r, raw)| {
            let total: f64 = raw.iter().map(|x| x + 0.05).sum();
            let mut angle = 0.0;
            let vertices = raw
                .iter()
                .map(|x| {
                    angle += 2.0 * PI * (x + 0.05) / total;
                    Point::new(c.x + r * angle.cos(), c.y + r * angle.sin())
                })
                .collect();
            ConvexBody::polytope(vertices).ok()
        },
    );
    prop_oneof![
        polygon,
        (center.clone(), 0.0..2.0f64).prop_map(|(c, r)| ConvexBody::ball(c, r).unwrap()),
        (center.clone(), -PI..PI, 0.1..2.0f64).prop_map(|(c, a, l)| {
            ConvexBody::segment(c, Point::new(c.x + l * a.cos(), c.y + l * a.sin()))
        }),
        (center, 0.1..2.0f64, -PI..PI).prop_map(|(c, r, a)| ConvexBody::half_disk(c, r, a).unwrap()),
    ]
}

fn grid() -> impl Strategy<Value = GridSpec> {
    prop::sample::select(vec![16usize, 32, 64, 128, 256]).prop_map(|n| GridSpec::new(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn brackets_sandwich_the_support_and_differ_by_delta(b in body(), g in grid(), pick in 0.0..1.0f64) {
        let i = 1 + (pick * g.n() as f64) as usize % g.n();
        let h = b.support(g.theta(i as isize));
        for &k in g.bandwidths() {
            let (lo, up) = population_brackets(&b, &g, i, k).unwrap();
            prop_assert!(lo <= h + 1e-9 && h <= up + 1e-9, "k={k}: {lo} {h} {up}");
            let delta = population_delta(&b, &g, i, k).unwrap();
            prop_assert!((delta - (up - lo)).abs() <= 1e-9, "k={k}: {delta} vs {}", up - lo);
        }
    }

    #[test]
    fn gap_grows_geometrically(b in body(), g in grid(), pick in 0.0..1.0f64) {
        let i = 1 + (pick * g.n() as f64) as usize % g.n();
        prop_assert_eq!(population_delta(&b, &g, i, 0).unwrap(), 0.0);
        let mut last = 0.0;
        for &k in g.bandwidths() {
            let d = population_delta(&b, &g, i, k).unwrap();
            let d2 = population_delta(&b, &g, i, 2 * k).unwrap();
            prop_assert!(d2 >= 1.5 * d - 1e-9, "k={k}: {d2} < 1.5 * {d}");
            prop_assert!(d >= last - 1e-9);
            last = d;
        }
    }

    #[test]
    fn gap_below_far_bracket(b in body(), g in grid(), pick in 0.0..1.0f64) {
        let i = 1 + (pick * g.n() as f64) as usize % g.n();
        let theta = g.theta(i as isize);
        for &k in g.bandwidths() {
            let a = 4.0 * PI * k as f64 / g.n() as f64;
            let bound = (b.support(theta + a) + b.support(theta - a)) / (2.0 * a.cos()) - b.support(theta);
            prop_assert!(population_delta(&b, &g, i, k).unwrap() <= bound + 1e-9);
        }
    }

    #[test]
    fn gap_brackets_the_oracle_bandwidth(b in body(), g in grid(), pick in 0.0..1.0f64, log_sigma in -4.0..1.0f64) {
        let i = 1 + (pick * g.n() as f64) as usize % g.n();
        let sigma = 10f64.powf(log_sigma);
        let profile = oracle_kstar(&b, &g, i, sigma).unwrap();
        let scaled = |k: usize| sigma / ((k + 1) as f64).sqrt();
        for &(k, d) in &profile.deltas {
            if k == profile.kstar {
                prop_assert!(d <= LARGE_GAP * scaled(k) + 1e-9);
            } else if k > profile.kstar {
                prop_assert!(d >= SMALL_GAP * scaled(k) - 1e-9);
            }
        }
        // Exact gaps as both bounds must bracket k*.
        let exact: Vec<f64> = profile.deltas.iter().map(|p| p.1).collect();
        let bracket = bracket_kstar(&exact, &exact, sigma, &g).unwrap();
        prop_assert!(bracket.lower <= profile.kstar && profile.kstar <= bracket.upper, "{bracket:?} vs {}", profile.kstar);
    }

    #[test]
    fn loose_bounds_still_bracket(b in body(), g in grid(), slack in 0.0..0.5f64, sigma in 0.01..1.0f64) {
        let i = g.n() / 2;
        let profile = oracle_kstar(&b, &g, i, sigma).unwrap();
        let f: Vec<f64> = profile.deltas.iter().map(|p| p.1 * (1.0 + slack) + 1e-12).collect();
        let lower: Vec<f64> = profile.deltas.iter().map(|p| p.1 * (1.0 - slack)).collect();
        let bracket = bracket_kstar(&f, &lower, sigma, &g).unwrap();
        prop_assert!(bracket.lower <= profile.kstar && profile.kstar <= bracket.upper);
    }
}

/// Benchmark ceiling over the library. `R` is the radius of the smallest
/// origin-centred disk containing the body; the constant was measured at
/// 6.32 on this sweep (Singleton, sigma = 1, n = 64, where `k*` hits
/// `n/16`).
#[test]
fn benchmark_below_universal_ceiling() {
    const CEILING: f64 = 8.0;
    for (name, b) in library() {
        let r = b.circumradius();
        for n in [64usize, 256, 1024, 4096] {
            let g = GridSpec::new(n).unwrap();
            for sigma in [1e-3, 1e-2, 0.1, 1.0] {
                let cap = CEILING * (sigma * sigma * r / n as f64).powf(2.0 / 3.0);
                for i in (1..=n).step_by(n / 64) {
                    let bench = oracle_kstar(&b, &g, i, sigma).unwrap().benchmark;
                    assert!(bench <= cap, "{name} n={n} sigma={sigma} i={i}: {bench} > {cap}");
                }
            }
        }
    }
}

#[test]
fn closed_form_gaps() {
    let g = GridSpec::new(256).unwrap();
    let n = 256.0;
    let ball = ConvexBody::ball(Point::ORIGIN, 1.5).unwrap();
    let segment = ConvexBody::segment(Point::new(0.0, 2.0), Point::new(0.0, -2.0));
    let zero = g.index_of_angle(0.0).unwrap();
    for &k in g.bandwidths() {
        let ball_expected: f64 = (0..=k)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / n;
                1.0 - (2.0 * a).cos() / a.cos()
            })
            .sum::<f64>()
            * 1.5
            / (k + 1) as f64;
        let segment_expected: f64 =
            (0..=k).map(|j| (2.0 * PI * j as f64 / n).tan()).sum::<f64>() * 2.0 / (k + 1) as f64;
        for i in [1, 77, 200] {
            assert!((population_delta(&ball, &g, i, k).unwrap() - ball_expected).abs() < 1e-12);
        }
        assert!((population_delta(&segment, &g, zero, k).unwrap() - segment_expected).abs() < 1e-12);
    }
}

#[test]
fn library_brackets_on_small_grid() {
    for (name, b) in library() {
        let g = GridSpec::new(64).unwrap();
        for i in 1..=64 {
            let h = b.support(g.theta(i as isize));
            for &k in g.bandwidths() {
                let (lo, up) = population_brackets(&b, &g, i, k).unwrap();
                assert!(lo <= h + 1e-9 && h <= up + 1e-9, "{name} i={i} k={k}");
            }
        }
    }
}
