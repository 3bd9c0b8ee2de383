use banditgv::estimator2p::{directional_value, query_points, rho_statistics, TwoPointEstimator};
use banditgv::Rng;
use proptest::prelude::*;

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

proptest! {
    #[test]
    fn deterministic_bounds_and_sparsity(
        dim in 1usize..8,
        g in 0.1f64..5.0,
        script in proptest::collection::vec((0usize..64, -1.0f64..1.0), 1..200),
    ) {
        let mut est = TwoPointEstimator::new(dim, 0.01);
        let mut latest = vec![0.0; dim];
        let d = dim as f64;
        for (t, (c, u)) in script.iter().enumerate() {
            let i = c % dim;
            let v = u * g;
            let before = est.optimism().to_vec();
            let e = est.update(t + 1, i, v);
            latest[i] = v;
            prop_assert!(norm_sq(&before) <= d * g * g * (1.0 + 1e-12));
            prop_assert!(norm_sq(&e.g) <= 10.0 * d * d * g * g * (1.0 + 1e-12));
            prop_assert!(e.innov_sq <= 4.0 * d * d * g * g * (1.0 + 1e-12));
            for k in 0..dim {
                let diff = e.g[k] - before[k];
                if k != i {
                    prop_assert_eq!(diff, 0.0);
                }
            }
            prop_assert_eq!(est.optimism(), &latest[..]);
        }
    }
}

#[test]
fn averaging_over_coordinates_recovers_linear_loss() {
    let mut rng = Rng::new(17);
    for trial in 0..100 {
        let dim = 1 + trial % 6;
        let ell: Vec<f64> = (0..dim).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let w: Vec<f64> = (0..dim).map(|_| rng.uniform(-0.5, 0.5)).collect();
        let g_tilde: Vec<f64> = (0..dim).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let delta = rng.uniform(1e-4, 0.1);
        let f = |x: &[f64]| x.iter().zip(&ell).map(|(a, b)| a * b).sum::<f64>();
        let mut avg = vec![0.0; dim];
        for i in 0..dim {
            let (xp, xm) = query_points(&w, i, delta);
            let v = directional_value(f(&xp), f(&xm), delta).unwrap();
            // g = d (v - g~_i) e_i + g~ evaluated independently of the estimator.
            for k in 0..dim {
                avg[k] += g_tilde[k] / dim as f64;
            }
            avg[i] += v - g_tilde[i];
        }
        for k in 0..dim {
            assert!(
                (avg[k] - ell[k]).abs() <= 1e-12,
                "trial {trial}: {avg:?} vs {ell:?}"
            );
        }
        // The estimator itself agrees with the hand expansion.
        let mut mean = vec![0.0; dim];
        for i in 0..dim {
            let mut est = TwoPointEstimator::new(dim, delta);
            for (k, gk) in g_tilde.iter().enumerate() {
                est.update(0, k, *gk);
            }
            let (xp, xm) = query_points(&w, i, delta);
            let v = directional_value(f(&xp), f(&xm), delta).unwrap();
            let e = est.update(1, i, v);
            mean.iter_mut()
                .zip(&e.g)
                .for_each(|(m, g)| *m += g / dim as f64);
        }
        for k in 0..dim {
            assert!((mean[k] - ell[k]).abs() <= 1e-12);
        }
    }
}

#[test]
fn rho_statistics_track_the_geometric_oracle() {
    let mut rng = Rng::new(4);
    let dim = 4;
    let coords: Vec<usize> = (0..40_000).map(|_| rng.sample_coordinate(dim)).collect();
    let s = rho_statistics(&coords, dim);
    assert!((s.mean_wait - dim as f64).abs() <= 0.05 * dim as f64);
    let harmonic: f64 = (1..=dim).map(|k| 1.0 / k as f64).sum();
    assert!((s.mean_collection - dim as f64 * harmonic).abs() <= 0.05 * dim as f64 * harmonic);
    assert!(s.mean_rho <= 2.0 * dim as f64 + 3.0 * s.se_rho);
    assert!(s.mean_max_rho <= 4.0 * dim as f64 * (dim as f64).ln() + 3.0 * s.se_max_rho);
    let empty = rho_statistics(&[], 3);
    assert_eq!(empty.rounds, 0);
}
