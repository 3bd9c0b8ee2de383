//! Acceptance suite: eleven criteria, each reported as one pass/fail line.
//!
//! Every criterion runs at its stated tolerance. Multi-seed criteria use 20 seeds
//! and compare seed means; seeds fan out over the worker pool.

use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use banditgv::adversary::{drift, Family, LossSequence};
use banditgv::bco2p::{run_two_point, TwoPointOptions, Variant};
use banditgv::blo1p::{
    fixed_point_residual, run_one_point, solve_coordinate, BarrierLearner, OnePointOptions,
};
use banditgv::ensemble::{run_dynamic, run_universal, EnsembleOptions};
use banditgv::estimator2p::{
    coupon_collector_mean, directional_value, query_points, rho_statistics, TwoPointEstimator,
};
use banditgv::game::{duality_gap, duality_gap_brute_force, run_game, GameConfig};
use banditgv::linalg::operator_norm;
use banditgv::metrics::{batch_mean_se, mean_se, slope_fit};
use banditgv::{Domain, Rng};
use rayon::prelude::*;

use crate::commands::{cmd_run_to, with_pool, CliError, CliResult};
use crate::config::ExperimentConfig;

pub const SEEDS: u64 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}  {}: {} ({:.1} s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.seconds
        )
    }
}

pub const NAMES: [&str; 11] = [
    "estimator determinism and bounds",
    "exact unbiasedness",
    "sampling-gap statistics",
    "convex gradient-variation scaling",
    "strongly convex gradient-variation scaling",
    "small-loss bound",
    "one-point solver",
    "one-point gradient-variation scaling",
    "ensembles",
    "bilinear game",
    "reproducibility",
];

/// Runs criterion `id` (1 to 11). Library errors count as failures.
pub fn run_criterion(id: usize) -> Outcome {
    let start = Instant::now();
    let result = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        _ => panic!("no criterion {id}"),
    };
    let (pass, detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Outcome {
        id,
        name: NAMES[id - 1],
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs all criteria inside the worker pool, writing each line as it finishes.
pub fn cmd_accept(out: &mut dyn Write) -> CliResult<()> {
    let mut failures = 0;
    for id in 1..=11 {
        let o = with_pool(|| run_criterion(id))?;
        writeln!(out, "{}", o.line())?;
        failures += usize::from(!o.pass);
    }
    writeln!(out, "{} of 11 criteria passed", 11 - failures)?;
    if failures > 0 {
        return Err(CliError::Acceptance(failures));
    }
    Ok(())
}

type Check = CliResult<(bool, String)>;

fn seed_mean(f: impl Fn(u64) -> banditgv::Result<f64> + Sync + Send) -> CliResult<(f64, f64)> {
    let v = (0..SEEDS)
        .into_par_iter()
        .map(f)
        .collect::<banditgv::Result<Vec<f64>>>()?;
    Ok(mean_se(&v))
}

fn square() -> Domain {
    Domain::cube(2, 1.0).expect("valid cube")
}

fn unit_ball() -> Domain {
    Domain::ball(2, 1.0).expect("valid ball")
}

fn rademacher(
    seed: u64,
    base: &[f64],
    horizon: usize,
    domain: &Domain,
) -> banditgv::Result<LossSequence> {
    let mut rng = Rng::with_stream(seed, Rng::ADVERSARY_STREAM);
    LossSequence::new(
        drift::rademacher_linear(base, 0.5, horizon, &mut rng),
        horizon,
        domain,
    )
}

fn stationary(horizon: usize, domain: &Domain) -> banditgv::Result<LossSequence> {
    LossSequence::new(
        Family::StationaryLinear { l: vec![0.6, -0.8] },
        horizon,
        domain,
    )
}

fn circular(horizon: usize) -> banditgv::Result<LossSequence> {
    LossSequence::new(
        drift::circular_centers(0.5, &[0.2, -0.1], 0.3, 64.0, horizon),
        horizon,
        &unit_ball(),
    )
}

fn two_point_regret(
    v: Variant,
    seq: &LossSequence,
    domain: &Domain,
    seed: u64,
) -> banditgv::Result<f64> {
    Ok(
        run_two_point(v, seq, domain, seed, &TwoPointOptions::default())?
            .summary
            .regret_center,
    )
}

fn c1() -> Check {
    let mut ok = true;
    let mut notes = Vec::new();
    for dim in [2usize, 5, 10] {
        let dom = Domain::cube(dim, 1.0)?;
        let seq = rademacher(1, &vec![0.0; dim], 10_000, &dom)?;
        let rec = run_two_point(
            Variant::GvConvex,
            &seq,
            &dom,
            1,
            &TwoPointOptions::default(),
        )?;
        let again = run_two_point(
            Variant::GvConvex,
            &seq,
            &dom,
            1,
            &TwoPointOptions::default(),
        )?;
        let repeat = rec.rows == again.rows;
        let g2 = seq.constants().g.powi(2);
        let d = dim as f64;
        let slack = 1.0 + 1e-12;
        let every = rec.rows.iter().all(|r| {
            r.opt_sq <= d * g2 * slack
                && r.g_sq <= 10.0 * d * d * g2 * slack
                && r.innov_sq <= 4.0 * d * d * g2 * slack
        });
        let gs: Vec<f64> = rec.rows.iter().map(|r| r.g_sq).collect();
        let innov: Vec<f64> = rec.rows.iter().map(|r| r.innov_sq).collect();
        let (mg, sg) = batch_mean_se(&gs, 50);
        let (mi, si) = batch_mean_se(&innov, 50);
        let means = mg <= 9.0 * d * g2 + 3.0 * sg && mi <= 4.0 * d * g2 + 3.0 * si;
        ok &= every && means && repeat;
        notes.push(format!(
            "d={dim}: rerun {}, per-round bounds {}, E|g|^2 {:.3} vs {:.3}, E|g-g~|^2 {:.3} vs {:.3}",
            if repeat { "identical" } else { "DIFFERS" },
            if every { "hold" } else { "VIOLATED" },
            mg,
            9.0 * d * g2,
            mi,
            4.0 * d * g2
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn c2() -> Check {
    let mut rng = Rng::new(2024);
    let mut worst_two = 0.0f64;
    let mut worst_one = 0.0f64;
    for trial in 0..100 {
        let dim = 1 + trial % 6;
        let ell: Vec<f64> = (0..dim).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let f = |x: &[f64]| x.iter().zip(&ell).map(|(a, b)| a * b).sum::<f64>();
        let w: Vec<f64> = (0..dim).map(|_| rng.uniform(-0.5, 0.5)).collect();
        let g_tilde: Vec<f64> = (0..dim).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let delta = rng.uniform(1e-4, 0.1);
        let mut mean = vec![0.0; dim];
        for i in 0..dim {
            let mut est = TwoPointEstimator::new(dim, delta);
            for (k, gk) in g_tilde.iter().enumerate() {
                est.update(0, k, *gk);
            }
            let (xp, xm) = query_points(&w, i, delta);
            let e = est.update(1, i, directional_value(f(&xp), f(&xm), delta)?);
            mean.iter_mut()
                .zip(&e.g)
                .for_each(|(m, g)| *m += g / dim as f64);
        }
        worst_two = mean
            .iter()
            .zip(&ell)
            .fold(worst_two, |a, (m, l)| a.max((m - l).abs()));

        let lower: Vec<f64> = (0..dim).map(|_| -rng.uniform(0.2, 2.0)).collect();
        let upper: Vec<f64> = (0..dim).map(|_| rng.uniform(0.2, 2.0)).collect();
        let dom = Domain::hyper_rectangle(lower.clone(), upper.clone())?;
        let wb: Vec<f64> = (0..dim)
            .map(|k| rng.uniform(0.8 * lower[k], 0.8 * upper[k]))
            .collect();
        let mut learner = BarrierLearner::new(&dom, 0.01, 1e-9)?;
        learner.set_state(wb.clone(), vec![0.0; dim], vec![0.0; dim])?;
        let rp: Vec<f64> = (0..dim)
            .map(|i| f(&learner.play_action(i, 1.0).x))
            .collect();
        let rm: Vec<f64> = (0..dim)
            .map(|i| f(&learner.play_action(i, -1.0).x))
            .collect();
        learner.set_state(wb, rp, rm)?;
        let opt = learner.optimism();
        let mut avg = vec![0.0; dim];
        for i in 0..dim {
            for sign in [1.0, -1.0] {
                let play = learner.play_action(i, sign);
                let g = learner.estimate(&play, f(&play.x), &opt);
                avg.iter_mut()
                    .zip(&g)
                    .for_each(|(a, b)| *a += b / (2 * dim) as f64);
            }
        }
        worst_one = avg
            .iter()
            .zip(&ell)
            .fold(worst_one, |a, (m, l)| a.max((m - l).abs()));
    }
    let ok = worst_two <= 1e-12 && worst_one <= 1e-12;
    Ok((
        ok,
        format!(
            "max deviation two-point {worst_two:.2e}, one-point {worst_one:.2e} (tolerance 1e-12)"
        ),
    ))
}

fn c3() -> Check {
    let mut ok = true;
    let mut notes = Vec::new();
    for dim in [3usize, 5, 10] {
        let mut rng = Rng::new(dim as u64);
        let coords: Vec<usize> = (0..100_000).map(|_| rng.sample_coordinate(dim)).collect();
        let s = rho_statistics(&coords, dim);
        let d = dim as f64;
        let coupon = coupon_collector_mean(dim);
        let pass = (s.mean_wait - d).abs() <= 0.05 * d
            && (s.mean_collection - coupon).abs() <= 0.05 * coupon
            && s.mean_rho <= 2.0 * d + 3.0 * s.se_rho
            && s.mean_max_rho <= 4.0 * d * d.ln() + 3.0 * s.se_max_rho;
        ok &= pass;
        notes.push(format!(
            "d={dim}: wait {:.3}, collection {:.3} (oracle {:.3}), E rho {:.3} <= {:.0}, E max rho {:.3} <= {:.2}",
            s.mean_wait,
            s.mean_collection,
            coupon,
            s.mean_rho,
            2.0 * d,
            s.mean_max_rho,
            4.0 * d * d.ln()
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn c4() -> Check {
    let dom = square();
    let mut points = Vec::new();
    for k in 9..=13 {
        let t = 1usize << k;
        let (m, _) = seed_mean(|s| {
            two_point_regret(
                Variant::GvConvex,
                &rademacher(s, &[0.0, 0.0], t, &dom)?,
                &dom,
                s,
            )
        })?;
        points.push((t as f64, m));
    }
    let fit = slope_fit(&points)?;
    let (lo, _) =
        seed_mean(|s| two_point_regret(Variant::GvConvex, &stationary(1 << 10, &dom)?, &dom, s))?;
    let (hi, _) =
        seed_mean(|s| two_point_regret(Variant::GvConvex, &stationary(1 << 12, &dom)?, &dom, s))?;
    let ratio = hi / lo;
    let ok = (0.35..=0.65).contains(&fit.slope) && ratio <= 2.2;
    Ok((
        ok,
        format!(
            "slope {:.3} +- {:.3} in [0.35, 0.65]; stationary ratio {:.3} <= 2.2",
            fit.slope, fit.half_width, ratio
        ),
    ))
}

fn c5() -> Check {
    let dom = unit_ball();
    let (lo, _) =
        seed_mean(|s| two_point_regret(Variant::GvStronglyConvex, &circular(1 << 10)?, &dom, s))?;
    let (hi, _) =
        seed_mean(|s| two_point_regret(Variant::GvStronglyConvex, &circular(1 << 13)?, &dom, s))?;
    let bound = 1.5 * 13.0 / 10.0;
    let ratio = hi / lo;
    Ok((
        ratio <= bound,
        format!("regret {lo:.4} -> {hi:.4}, ratio {ratio:.3} <= {bound:.3}"),
    ))
}

fn c6() -> Check {
    let dom = unit_ball();
    let seq = |t: usize| {
        LossSequence::new(
            Family::StrongQuadratic {
                lambda: 1.0,
                centers: vec![vec![0.3, -0.2]; t],
            },
            t,
            &dom,
        )
    };
    let (lo, _) = seed_mean(|s| two_point_regret(Variant::SmallLoss, &seq(1000)?, &dom, s))?;
    let (hi, _) = seed_mean(|s| two_point_regret(Variant::SmallLoss, &seq(10_000)?, &dom, s))?;
    let ratio = hi / lo;
    Ok((
        ratio <= 1.3,
        format!("regret {lo:.4} -> {hi:.4}, ratio {ratio:.3} <= 1.3"),
    ))
}

/// Brackets the root of the monotone coordinate equation on a grid of `n` cells.
fn grid_bracket(s: f64, c: f64, eta: f64, a: f64, b: f64, n: usize) -> Option<(f64, f64)> {
    let h = (b - a) / n as f64;
    let mut prev = a + h;
    let mut fprev = fixed_point_residual(prev, s, c, eta, a, b);
    if fprev >= 0.0 {
        return Some((a, prev));
    }
    for k in 2..n {
        let x = a + h * k as f64;
        let fx = fixed_point_residual(x, s, c, eta, a, b);
        if fx >= 0.0 && fprev < 0.0 {
            return Some((prev, x));
        }
        prev = x;
        fprev = fx;
    }
    Some((prev, b))
}

fn c7() -> Check {
    let mut rng = Rng::new(77);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = -rng.uniform(0.1, 3.0);
        let b = rng.uniform(0.1, 3.0);
        let eta = rng.uniform(0.001, 0.5);
        let c = rng.uniform(-0.99, 0.99) / eta;
        let s = rng.uniform(-50.0, 50.0);
        let root = solve_coordinate(s, c, eta, a, b, 1e-12)?;
        let (lo, hi) = grid_bracket(s, c, eta, a, b, 1_000_000).expect("bracket");
        let miss = (lo - root).max(root - hi).max(0.0);
        worst = worst.max(miss);
    }
    let solver_ok = worst <= 1e-6;

    let dom = square();
    let seq = rademacher(3, &[0.0, 0.0], 10_000, &dom)?;
    let rec = run_one_point(&seq, &dom, 3, &OnePointOptions::default())?;
    let interior = rec
        .rows
        .iter()
        .all(|r| r.x.iter().chain(&r.w).all(|v| v.abs() < 1.0));

    let mut worst_rel = 0.0f64;
    for seed in 0..5 {
        let seq = rademacher(seed, &[0.3, -0.4], 10_000, &dom)?;
        let coarse = run_one_point(
            &seq,
            &dom,
            seed,
            &OnePointOptions {
                tol: Some(1e-4),
                ..Default::default()
            },
        )?;
        let fine = run_one_point(
            &seq,
            &dom,
            seed,
            &OnePointOptions {
                tol: Some(1e-5),
                ..Default::default()
            },
        )?;
        worst_rel = worst_rel
            .max((coarse.summary.loss - fine.summary.loss).abs() / fine.summary.loss.abs());
    }
    let tol_ok = worst_rel < 0.01;
    Ok((
        solver_ok && interior && tol_ok,
        format!(
            "grid miss {worst:.1e} <= 1e-6; strict interiority {}; total-loss change tol 1/T vs 1/(10T) {:.3}% < 1%",
            if interior { "holds" } else { "VIOLATED" },
            100.0 * worst_rel
        ),
    ))
}

fn one_point_regret(seq: &LossSequence, domain: &Domain, seed: u64) -> banditgv::Result<f64> {
    Ok(
        run_one_point(seq, domain, seed, &OnePointOptions::default())?
            .summary
            .regret,
    )
}

fn c8() -> Check {
    let dom = square();
    let mut points = Vec::new();
    for k in 9..=12 {
        let t = 1usize << k;
        let (m, _) =
            seed_mean(|s| one_point_regret(&rademacher(s, &[0.0, 0.0], t, &dom)?, &dom, s))?;
        points.push((t as f64, m));
    }
    let fit = slope_fit(&points)?;
    let (lo, _) = seed_mean(|s| one_point_regret(&stationary(2000, &dom)?, &dom, s))?;
    let (hi, _) = seed_mean(|s| one_point_regret(&stationary(4000, &dom)?, &dom, s))?;
    let ratio = hi / lo;
    let ok = (0.35..=0.7).contains(&fit.slope) && ratio <= 1.6;
    Ok((
        ok,
        format!(
            "slope {:.3} +- {:.3} in [0.35, 0.7]; stationary ratio {:.3} <= 1.6",
            fit.slope, fit.half_width, ratio
        ),
    ))
}

struct Class {
    name: &'static str,
    domain: Domain,
    dedicated: Variant,
    build: fn(u64, usize) -> banditgv::Result<LossSequence>,
}

fn classes() -> Vec<Class> {
    vec![
        Class {
            name: "linear",
            domain: square(),
            dedicated: Variant::GvConvex,
            build: |_, t| stationary(t, &square()),
        },
        Class {
            name: "convex",
            domain: square(),
            dedicated: Variant::GvConvex,
            build: |s, t| {
                let mut rng = Rng::with_stream(s, Rng::ADVERSARY_STREAM);
                LossSequence::new(
                    drift::rademacher_quadratic(
                        &[1.0, 0.0, 0.0, 0.0],
                        &[0.2, 0.3],
                        0.3,
                        t,
                        &mut rng,
                    ),
                    t,
                    &square(),
                )
            },
        },
        Class {
            name: "strongly convex",
            domain: unit_ball(),
            dedicated: Variant::GvStronglyConvex,
            build: |_, t| circular(t),
        },
    ]
}

fn c9() -> Check {
    let t = 4096;
    let mut ok = true;
    let mut notes = Vec::new();

    let dom = square();
    let seq = rademacher(5, &[0.1, -0.1], 2000, &dom)?;
    let eta = 0.02;
    let single = run_dynamic(
        &seq,
        &dom,
        5,
        &EnsembleOptions {
            pool: Some(vec![eta]),
            ..Default::default()
        },
    )?;
    let base = run_two_point(
        Variant::GvConvex,
        &seq,
        &dom,
        5,
        &TwoPointOptions {
            eta: Some(eta),
            ..Default::default()
        },
    )?;
    let reduction = single.run.rows.len() == base.rows.len()
        && single
            .run
            .rows
            .iter()
            .zip(&base.rows)
            .all(|(a, b)| a.w == b.w && a.coord == b.coord);
    ok &= reduction;
    notes.push(format!(
        "N=1 reduction {}",
        if reduction { "exact" } else { "BROKEN" }
    ));

    let mut simplex = 0.0f64;
    let mut violation = 0.0f64;
    for class in classes() {
        let results = (0..SEEDS)
            .into_par_iter()
            .map(|s| -> banditgv::Result<(f64, f64, f64, f64)> {
                let seq = (class.build)(s, t)?;
                let u = run_universal(&seq, &class.domain, s, &EnsembleOptions::default())?;
                let dy = run_dynamic(&seq, &class.domain, s, &EnsembleOptions::default())?;
                let d = two_point_regret(class.dedicated, &seq, &class.domain, s)?;
                let simplex = u
                    .summary
                    .max_simplex_error
                    .max(dy.summary.max_simplex_error);
                Ok((
                    u.run.summary.regret_center,
                    d,
                    simplex,
                    u.summary.max_preclip_violation,
                ))
            })
            .collect::<banditgv::Result<Vec<_>>>()?;
        let (mu, _) = mean_se(&results.iter().map(|r| r.0).collect::<Vec<_>>());
        let (md, _) = mean_se(&results.iter().map(|r| r.1).collect::<Vec<_>>());
        simplex = results.iter().fold(simplex, |a, r| a.max(r.2));
        violation = results.iter().fold(violation, |a, r| a.max(r.3));
        let pass = mu <= 3.0 * md;
        ok &= pass;
        notes.push(format!(
            "{}: universal {mu:.3} vs dedicated {md:.3} (limit 3x)",
            class.name
        ));
    }
    ok &= simplex <= 1e-12 && violation < 1e-9;
    notes.push(format!(
        "max simplex error {simplex:.1e}, max pre-clip violation {violation:.1e}"
    ));
    Ok((ok, notes.join("; ")))
}

fn c10() -> Check {
    let mut ok = true;
    let mut notes = Vec::new();
    let games: [(Vec<f64>, usize); 2] = [(vec![1.0], 1), (vec![0.5, -0.5, 0.5, 0.5], 2)];
    let mut identity = 0.0f64;
    for (a, d) in &games {
        let cfg = GameConfig::new(
            a.clone(),
            *d,
            *d,
            Domain::cube(*d, 1.0)?,
            Domain::cube(*d, 1.0)?,
            4096,
        )?;
        let recs = (0..SEEDS)
            .into_par_iter()
            .map(|s| run_game(&cfg, s))
            .collect::<banditgv::Result<Vec<_>>>()?;
        let half: Vec<f64> = recs
            .iter()
            .map(|r| r.gap_at(2048).expect("checkpoint"))
            .collect();
        let full: Vec<f64> = recs
            .iter()
            .map(|r| r.gap_at(4096).expect("checkpoint"))
            .collect();
        identity = recs
            .iter()
            .flat_map(|r| &r.checkpoints)
            .fold(identity, |a, c| a.max(c.identity_residual));
        let ratio = mean_se(&full).0 / mean_se(&half).0;
        ok &= ratio <= 0.6;
        notes.push(format!(
            "{d}x{d}: gap {:.4} -> {:.4}, ratio {ratio:.3} <= 0.6",
            mean_se(&half).0,
            mean_se(&full).0
        ));
    }
    let mut rng = Rng::new(10);
    let mut brute = 0.0f64;
    for m in 1..=4 {
        for n in 1..=4 {
            let mut a: Vec<f64> = (0..m * n).map(|_| rng.standard_normal()).collect();
            let op = operator_norm(&a, m, n, 1e-12);
            a.iter_mut().for_each(|v| *v /= op);
            let xd = Domain::cube(m, rng.uniform(0.5, 2.0))?;
            let yd = Domain::cube(n, rng.uniform(0.5, 2.0))?;
            let x = xd.sample_point(0.0, &mut rng);
            let y = yd.sample_point(0.0, &mut rng);
            let fast = duality_gap(&a, m, n, &x, &y, &xd, &yd)?;
            brute = brute.max((fast - duality_gap_brute_force(&a, m, n, &x, &y, &xd, &yd)?).abs());
        }
    }
    ok &= identity <= 1e-9 && brute <= 1e-12;
    notes.push(format!(
        "regret identity residual {identity:.1e}, vertex enumeration deviation {brute:.1e}"
    ));
    Ok((ok, notes.join("; ")))
}

static SCRATCH: AtomicUsize = AtomicUsize::new(0);

fn scratch_dir() -> PathBuf {
    let k = SCRATCH.fetch_add(1, Ordering::SeqCst);
    std::env::temp_dir().join(format!("banditgv-accept-{}-{k}", std::process::id()))
}

fn dir_bytes(dir: &std::path::Path) -> std::io::Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        files.push((
            entry.file_name().to_string_lossy().into_owned(),
            std::fs::read(entry.path())?,
        ));
    }
    files.sort();
    Ok(files)
}

pub const REPRO_CONFIGS: [&str; 4] = [
    "algorithm = gv_convex\nhorizon = 300\nseeds = 3\ndomain.kind = cube\ndomain.dim = 2\ndomain.half_width = 1\nadversary.family = rademacher_linear\nadversary.base = 0.1, -0.2\nadversary.scale = 0.5\n",
    "algorithm = one_point\nhorizon = 300\nseed_list = 4, 9\ndomain.kind = box\ndomain.lower = -1, -0.5\ndomain.upper = 2, 0.5\nadversary.family = switching_linear\nadversary.a = 0.5, 0.5\nadversary.b = -0.5, 0.2\nadversary.switches = 3\n",
    "algorithm = universal\nhorizon = 200\nseeds = 2\ndomain.kind = ball\ndomain.dim = 3\ndomain.radius = 1\nadversary.family = circular_centers\nadversary.lambda = 0.5\nadversary.center = 0.1, 0, -0.1\nadversary.radius = 0.2\nadversary.period = 40\n",
    "algorithm = sphere\nhorizon = 200\nseeds = 2\ndomain.kind = ball\ndomain.dim = 2\ndomain.radius = 1\nadversary.family = strong_quadratic\nadversary.lambda = 1\nadversary.center = 0.3, -0.2\n",
];

fn c11() -> Check {
    let mut ok = true;
    let mut files = 0;
    for text in REPRO_CONFIGS {
        let cfg = ExperimentConfig::parse(text)?;
        let (a, b) = (scratch_dir(), scratch_dir());
        cmd_run_to(&cfg, &a)?;
        cmd_run_to(&cfg, &b)?;
        let (fa, fb) = (dir_bytes(&a)?, dir_bytes(&b)?);
        ok &= !fa.is_empty() && fa == fb;
        files += fa.len();
        let _ = std::fs::remove_dir_all(&a);
        let _ = std::fs::remove_dir_all(&b);
    }
    Ok((
        ok,
        format!(
            "{} configs, {files} CSV files byte-identical across reruns: {}",
            REPRO_CONFIGS.len(),
            if ok { "yes" } else { "NO" }
        ),
    ))
}
