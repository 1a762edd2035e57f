use convex_support::cone_projection::{membership, project, project_oracle, ProjectionOptions};
use convex_support::geometry::{library, GridSpec, SupportFunction};
use proptest::prelude::*;

fn vector(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    (min..=max).prop_flat_map(|n| prop::collection::vec(-3.0..3.0f64, n))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interior_point_matches_the_oracle(v in vector(5, 16)) {
        let r = project(&v, &ProjectionOptions::default()).unwrap();
        prop_assert!(r.converged);
        let exact = project_oracle(&v).unwrap();
        prop_assert!(linf(&r.projected, &exact) <= 1e-7, "{:?} vs {:?}", r.projected, exact);
    }

    #[test]
    fn dykstra_matches_interior_point(v in vector(16, 24)) {
        let a = project(&v, &ProjectionOptions::default()).unwrap();
        let b = project(&v, &ProjectionOptions::dykstra()).unwrap();
        prop_assert!(a.converged && b.converged);
        prop_assert!(linf(&a.projected, &b.projected) <= 1e-6);
    }

    #[test]
    fn projection_satisfies_the_variational_inequality(v in vector(16, 200), w in vector(16, 200)) {
        let n = v.len();
        let p = project(&v, &ProjectionOptions::default()).unwrap();
        prop_assert!(p.converged && membership(&p.projected, 1e-9));
        // Any other projection is a point of the cone to test against.
        let w: Vec<f64> = w.iter().cycle().take(n).copied().collect();
        let q = project(&w, &ProjectionOptions::default()).unwrap().projected;
        let normal: Vec<f64> = v.iter().zip(&p.projected).map(|(a, b)| a - b).collect();
        let scale = 1.0 + dot(&v, &v).sqrt();
        prop_assert!(dot(&normal, &p.projected).abs() <= 1e-8 * scale * scale);
        prop_assert!(dot(&normal, &q) <= 1e-8 * scale * (1.0 + dot(&q, &q).sqrt()));
    }

    #[test]
    fn projection_is_idempotent_and_positively_homogeneous(v in vector(16, 300), t in 0.01..100.0f64) {
        let opts = ProjectionOptions::default();
        let p = project(&v, &opts).unwrap().projected;
        let again = project(&p, &opts).unwrap();
        prop_assert!(again.distance <= 1e-7 * (1.0 + dot(&p, &p).sqrt()));
        let scaled: Vec<f64> = v.iter().map(|x| t * x).collect();
        let ps = project(&scaled, &opts).unwrap().projected;
        let expected: Vec<f64> = p.iter().map(|x| t * x).collect();
        prop_assert!(linf(&ps, &expected) <= 1e-7 * t.max(1.0));
    }

    #[test]
    fn noisy_support_vectors_project_closer_to_the_truth(pick in 0usize..5, noise in vector(64, 64), level in 0.0..1.0f64) {
        let (_, body) = library().swap_remove(pick);
        let g = GridSpec::new(64).unwrap();
        let truth = body.sample(&g);
        let noisy: Vec<f64> = truth.iter().zip(&noise).map(|(h, e)| h + level * e).collect();
        let p = project(&noisy, &ProjectionOptions::default()).unwrap().projected;
        let before: f64 = noisy.iter().zip(&truth).map(|(a, b)| (a - b).powi(2)).sum();
        let after: f64 = p.iter().zip(&truth).map(|(a, b)| (a - b).powi(2)).sum();
        prop_assert!(after <= before + 1e-9);
    }
}

#[test]
fn sinusoids_are_fixed_and_their_negatives_are_too() {
    let n = 48;
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let wave: Vec<f64> = (0..n).map(|i| 0.7 * (step * i as f64).cos() - 0.2 * (step * i as f64).sin()).collect();
    for v in [wave.clone(), wave.iter().map(|x| -x).collect()] {
        let r = project(&v, &ProjectionOptions::default()).unwrap();
        assert!(r.converged && r.distance < 1e-9);
    }
}

#[test]
fn large_grids_converge() {
    for n in [2048usize, 8192] {
        let g = GridSpec::new(n).unwrap();
        for (name, body) in library() {
            let v: Vec<f64> = body
                .sample(&g)
                .iter()
                .enumerate()
                .map(|(i, h)| h + 0.3 * ((i * 7919) as f64).sin())
                .collect();
            let r = project(&v, &ProjectionOptions::default()).unwrap();
            assert!(r.converged, "{name} n={n}");
            assert!(r.residual <= 1e-9 && membership(&r.projected, 1e-9));
        }
    }
}
