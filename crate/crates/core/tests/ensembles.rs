use banditgv::adversary::{Family, LossSequence, Segment, ValueOracle};
use banditgv::bco2p::{exploration, run_two_point, TwoPointOptions, Variant};
use banditgv::ensemble::{
    dynamic_pool, run_dynamic, run_universal, universal_optimism_fixed_point, EnsembleOptions,
    ExpertKind, MlProdMeta,
};
use banditgv::metrics::mean_se;
use banditgv::oogd::ln_horizon;
use banditgv::Domain;

fn two_segments(t: usize) -> Family {
    Family::PiecewiseStationary {
        segments: vec![
            Segment {
                len: t / 2,
                family: Family::StationaryLinear { l: vec![0.6, -0.8] },
            },
            Segment {
                len: t - t / 2,
                family: Family::StationaryLinear { l: vec![-0.8, 0.6] },
            },
        ],
    }
}

#[test]
fn single_step_size_reduces_to_the_base_learner() {
    let cube = Domain::cube(2, 1.0).unwrap();
    let seq = LossSequence::new(two_segments(800), 800, &cube).unwrap();
    let eta = 0.05;
    let opts = EnsembleOptions {
        pool: Some(vec![eta]),
        ..Default::default()
    };
    let ens = run_dynamic(&seq, &cube, 4, &opts).unwrap();
    let base = run_two_point(
        Variant::GvConvex,
        &seq,
        &cube,
        4,
        &TwoPointOptions {
            eta: Some(eta),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(ens.run.rows.len(), base.rows.len());
    for (a, b) in ens.run.rows.iter().zip(&base.rows) {
        assert_eq!(a.w, b.w);
        assert_eq!((a.coord, a.v, a.innov_sq), (b.coord, b.v, b.innov_sq));
    }
    assert!(ens.meta.iter().all(|m| m.weights == vec![1.0]));
}

#[test]
fn stationary_dynamic_regret_equals_static_regret() {
    let cube = Domain::cube(2, 1.0).unwrap();
    let seq =
        LossSequence::new(Family::StationaryLinear { l: vec![0.3, -0.5] }, 1000, &cube).unwrap();
    let rec = run_dynamic(&seq, &cube, 1, &EnsembleOptions::default()).unwrap();
    assert_eq!(rec.summary.path_length, Some(0.0));
    assert!((rec.summary.dynamic_regret.unwrap() - rec.run.summary.regret_center).abs() <= 1e-9);
}

#[test]
fn one_query_pair_per_round_and_simplex_weights() {
    let cube = Domain::cube(3, 1.0).unwrap();
    let seq = LossSequence::new(
        Family::StationaryLinear {
            l: vec![0.3, -0.5, 0.2],
        },
        700,
        &cube,
    )
    .unwrap();
    let opts = EnsembleOptions {
        pool: Some(vec![0.01, 0.02, 0.04, 0.08]),
        ..Default::default()
    };
    for rec in [
        run_dynamic(&seq, &cube, 2, &opts).unwrap(),
        run_universal(&seq, &cube, 2, &opts).unwrap(),
    ] {
        assert_eq!(rec.run.rows.len(), 700);
        assert!(rec.run.rows.iter().all(|r| r.coord.is_some()));
        for m in &rec.meta {
            let s: f64 = m.weights.iter().sum();
            assert!((s - 1.0).abs() <= 1e-12 && m.weights.iter().all(|p| *p >= 0.0));
        }
        assert!(rec.summary.max_preclip_violation < 1e-9);
        assert_eq!(rec.summary.clips, 0);
    }
}

#[test]
fn fixed_point_on_a_hand_built_instance() {
    let kinds = [
        ExpertKind::StronglyConvex { lambda: 0.25 },
        ExpertKind::Convex,
        ExpertKind::Linear,
    ];
    let meta = MlProdMeta::from_parts(vec![-0.3, -1.5, -0.9], vec![0.125, 0.1, 0.05], vec![0.0; 3]);
    let bases = vec![vec![0.5, -0.2], vec![-0.7, 0.4], vec![0.1, 0.9]];
    let g_tilde = [1.5, -2.0];
    let horizon = 1000;
    let fp = universal_optimism_fixed_point(
        &g_tilde,
        &bases,
        &kinds,
        &meta,
        0.5,
        5.0,
        1.0 / horizon as f64,
        0.0,
    );
    assert!(!fp.fallback);
    let w: Vec<f64> = (0..2)
        .map(|k| fp.p.iter().zip(&bases).map(|(p, b)| p * b[k]).sum())
        .collect();
    let image = g_tilde[0] * w[0] + g_tilde[1] * w[1];
    assert!((fp.z - image).abs() <= 1.0 / horizon as f64);
    assert_eq!(fp.m[0], 0.0);
    for i in 1..3 {
        let expect = (fp.z - (g_tilde[0] * bases[i][0] + g_tilde[1] * bases[i][1])) / 0.5;
        assert!((fp.m[i] - expect).abs() <= 1e-12);
    }
    assert_eq!(fp.p, meta.weights(&fp.m));
}

#[test]
fn strongly_convex_learner_matches_hand_expansion_at_round_two() {
    let ball = Domain::ball(2, 10.0).unwrap();
    let seq = LossSequence::new(
        Family::StationaryLinear {
            l: vec![0.1, -0.05],
        },
        2,
        &ball,
    )
    .unwrap();
    let lambda = 0.5;
    let opts = EnsembleOptions {
        lambda_grid: Some(vec![lambda]),
        ..Default::default()
    };
    let rec = run_universal(&seq, &ball, 3, &opts).unwrap();
    let r1 = &rec.run.rows[0];
    let i = r1.coord.unwrap();
    let d = 2.0;
    let mut g1 = [0.0; 2];
    g1[i] = d * r1.v;
    let mut hint = [0.0; 2];
    hint[i] = r1.v;
    assert_eq!(r1.w, vec![0.0, 0.0]);
    // Strongly convex learner: w_1 equals the combined center so the curvature
    // terms vanish; eta_1 = 2 / lambda, eta_2 = 1 / lambda.
    let sc: Vec<f64> = (0..2)
        .map(|k| -(2.0 / lambda) * g1[k] - (1.0 / lambda) * hint[k])
        .collect();
    // Convex and linear learners: eta = 2R / sqrt(d^2 + Vbar) with R = 10.
    let vbar = g1[0] * g1[0] + g1[1] * g1[1];
    let flat: Vec<f64> = (0..2)
        .map(|k| -(20.0 / d) * g1[k] - 20.0 / (d * d + vbar).sqrt() * hint[k])
        .collect();
    let p = &rec.meta[1].weights;
    for k in 0..2 {
        let expect = p[0] * sc[k] + (p[1] + p[2]) * flat[k];
        assert!(
            (rec.run.rows[1].w[k] - expect).abs() <= 1e-12,
            "{:?} {expect} {p:?} {sc:?} {flat:?}",
            rec.run.rows[1].w
        );
    }
}

#[test]
fn dynamic_ensemble_tracks_a_switch() {
    let cube = Domain::cube(2, 1.0).unwrap();
    let horizon = 4096;
    let seq = LossSequence::new(two_segments(horizon), horizon, &cube).unwrap();
    let consts = seq.constants();
    let pool = dynamic_pool(cube.circumradius(), consts.l, 2, horizon);
    let n = pool.len() as f64;
    let c0 = 16.0 * cube.circumradius().powi(3) * (8.0 * ln_horizon(horizon) * n.ln()).sqrt();
    let seeds = 0..20u64;
    let ens: Vec<f64> = seeds
        .clone()
        .map(|s| {
            run_dynamic(&seq, &cube, s, &EnsembleOptions::default())
                .unwrap()
                .summary
                .dynamic_regret
                .unwrap()
        })
        .collect();
    let best = pool
        .iter()
        .map(|&eta| {
            let o = EnsembleOptions {
                pool: Some(vec![eta]),
                ..Default::default()
            };
            let v: Vec<f64> = seeds
                .clone()
                .map(|s| {
                    run_dynamic(&seq, &cube, s, &o)
                        .unwrap()
                        .summary
                        .dynamic_regret
                        .unwrap()
                })
                .collect();
            mean_se(&v).0
        })
        .fold(f64::INFINITY, f64::min);
    let margin = 2.0 * c0 * n.ln().sqrt();
    assert!(
        mean_se(&ens).0 <= best + margin,
        "ensemble {} best {best} margin {margin}",
        mean_se(&ens).0
    );
    let exp = exploration(2, consts, &cube, horizon, &TwoPointOptions::default()).unwrap();
    assert!(exp.shrink > 0.0 && seq.value(1, &[0.0, 0.0]).unwrap() == 0.0);
}
