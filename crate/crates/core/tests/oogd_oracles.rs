use banditgv::oogd::{OogdState, StepSchedule};
use banditgv::Domain;

fn ball_proj(x: &[f64], r: f64) -> Vec<f64> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n <= r {
        x.to_vec()
    } else {
        x.iter().map(|v| v * r / n).collect()
    }
}

#[test]
fn matches_straight_line_reimplementation() {
    let dom = Domain::ball(2, 1.0).unwrap();
    let shrink = 0.1;
    let gs: [[f64; 2]; 5] = [
        [1.0, 0.5],
        [-0.3, 2.0],
        [0.7, -0.7],
        [2.5, 0.1],
        [-1.0, -1.0],
    ];
    let hints: [[f64; 2]; 6] = [
        [0.0, 0.0],
        [0.9, 0.4],
        [-0.2, 1.5],
        [0.5, -0.5],
        [2.0, 0.0],
        [-0.8, -1.1],
    ];
    let schedule = StepSchedule::variance(2, 1.0);
    let mut state = OogdState::new(&dom, shrink).unwrap();

    let mut w_hat = vec![0.0, 0.0];
    let mut vbar = 0.0;
    for t in 0..5 {
        let g = gs[t];
        let innov = (g[0] - hints[t][0]).powi(2) + (g[1] - hints[t][1]).powi(2);
        let eta_t = 1.0 / (4.0f64 + vbar).sqrt();
        let eta_n = 1.0 / (4.0f64 + vbar + innov).sqrt();
        w_hat = ball_proj(&[w_hat[0] - eta_t * g[0], w_hat[1] - eta_t * g[1]], 0.9);
        let w = ball_proj(
            &[
                w_hat[0] - eta_n * hints[t + 1][0],
                w_hat[1] - eta_n * hints[t + 1][1],
            ],
            0.9,
        );
        vbar += innov;
        let sizes = state
            .step_with(&schedule, &g, &hints[t], &hints[t + 1], &dom, shrink)
            .unwrap();
        assert!((sizes.eta_t - eta_t).abs() <= 1e-12 && (sizes.eta_next - eta_n).abs() <= 1e-12);
        for k in 0..2 {
            assert!((state.internal()[k] - w_hat[k]).abs() <= 1e-12);
            assert!((state.center()[k] - w[k]).abs() <= 1e-12);
        }
        assert!((state.vbar() - vbar).abs() <= 1e-12);
    }
}

#[test]
fn fixed_step_without_optimism_is_projected_gradient_descent() {
    let dom = Domain::hyper_rectangle(vec![-1.0, -2.0, -0.5], vec![1.0, 0.5, 3.0]).unwrap();
    let fixed = StepSchedule::Fixed { eta: 0.3 };
    let mut state = OogdState::new(&dom, 0.0).unwrap();
    let mut x = vec![0.0; 3];
    let zero = [0.0; 3];
    for t in 0..40 {
        let g = [
            ((t * 7) % 5) as f64 - 2.0,
            ((t * 3) % 4) as f64 - 1.5,
            1.0 - (t % 3) as f64,
        ];
        let before = state.vbar();
        state
            .step_with(&fixed, &g, &zero, &zero, &dom, 0.0)
            .unwrap();
        assert!(state.vbar() >= before);
        let lo = [-1.0, -2.0, -0.5];
        let hi = [1.0, 0.5, 3.0];
        for k in 0..3 {
            x[k] = (x[k] - 0.3 * g[k]).clamp(lo[k], hi[k]);
        }
        assert_eq!(state.center(), &x[..]);
        assert_eq!(state.internal(), &x[..]);
    }
}
