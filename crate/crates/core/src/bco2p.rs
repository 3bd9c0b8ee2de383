//! Two-point bandit convex optimization runners.
//!
//! [`run_two_point`] is the optimistic coordinate-sampling learner under one of four
//! step-size schedules. [`run_sphere_sgd`] is the sphere-sampling baseline for
//! strongly convex losses (plain projected descent, no optimism).

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::adversary::{Constants, LossSequence, ValueOracle};
use crate::error::{Error, Result};
use crate::estimator2p::{check_lipschitz, directional_value, query_points, TwoPointEstimator};
use crate::geometry::{Domain, Rng};
use crate::linalg::{axpy, norm_sq};
use crate::metrics::{small_loss, static_regret};
use crate::oogd::{OogdState, StepSchedule};
use crate::record::{RunRecord, Summary, TwoPointRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    GvConvex,
    GvStronglyConvex,
    Variance,
    SmallLoss,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::GvConvex,
        Variant::GvStronglyConvex,
        Variant::Variance,
        Variant::SmallLoss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::GvConvex => "gv_convex",
            Variant::GvStronglyConvex => "gv_strongly_convex",
            Variant::Variance => "variance",
            Variant::SmallLoss => "small_loss",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown two-point variant `{s}`")))
    }
}

/// Overrides for the default exploration radius, shrinkage and step size.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TwoPointOptions {
    pub delta: Option<f64>,
    pub shrink: Option<f64>,
    /// Replace the variant's schedule with a fixed step size.
    pub eta: Option<f64>,
    /// Measure wall time. Off by default so that summaries are reproducible.
    pub wallclock: bool,
}

/// Exploration radius and shrinkage actually used by a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exploration {
    pub delta: f64,
    pub shrink: f64,
}

/// `delta = 1/(2 d^2 L T R)`, `xi = delta / R`, raised to `delta / r` when the
/// domain's inradius `r` is smaller than `R` so that `w +- delta e_i` stays in `X`.
pub fn exploration(
    dim: usize,
    consts: Constants,
    domain: &Domain,
    horizon: usize,
    opts: &TwoPointOptions,
) -> Result<Exploration> {
    let r_big = domain.circumradius();
    let r_small = domain.inradius();
    if !(r_small > 0.0) {
        return Err(Error::Precondition(
            "two-point learners need the origin in the interior of the domain".into(),
        ));
    }
    let d = dim as f64;
    let delta = opts
        .delta
        .unwrap_or(1.0 / (2.0 * d * d * consts.l * horizon.max(1) as f64 * r_big));
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Config(format!(
            "exploration radius must be positive, got {delta}"
        )));
    }
    let shrink = opts.shrink.unwrap_or(delta / r_big).max(delta / r_small);
    if !(shrink < 1.0) {
        return Err(Error::Config(format!(
            "exploration radius {delta} needs shrinkage {shrink} >= 1 on this domain"
        )));
    }
    Ok(Exploration { delta, shrink })
}

pub fn schedule_for(
    variant: Variant,
    dim: usize,
    consts: Constants,
    domain: &Domain,
    horizon: usize,
    opts: &TwoPointOptions,
) -> Result<StepSchedule> {
    if let Some(eta) = opts.eta {
        let s = StepSchedule::Fixed { eta };
        s.validate()?;
        return Ok(s);
    }
    let r = domain.circumradius();
    Ok(match variant {
        Variant::GvConvex => StepSchedule::gv_convex(dim, r, consts.l, horizon),
        Variant::GvStronglyConvex => {
            if !(consts.lambda > 0.0) {
                return Err(Error::Config(
                    "gv_strongly_convex needs a strongly convex adversary".into(),
                ));
            }
            StepSchedule::strongly_convex(consts.lambda)?
        }
        Variant::Variance | Variant::SmallLoss => StepSchedule::variance(dim, r),
    })
}

pub fn run_two_point(
    variant: Variant,
    seq: &LossSequence,
    domain: &Domain,
    seed: u64,
    opts: &TwoPointOptions,
) -> Result<RunRecord> {
    let consts = seq.constants();
    let horizon = seq.horizon();
    let dim = domain.dim();
    let schedule = schedule_for(variant, dim, consts, domain, horizon, opts)?;
    let exp = exploration(dim, consts, domain, horizon, opts)?;
    let start = opts.wallclock.then(Instant::now);
    let rows = coordinate_loop(seq, consts.g, domain, exp, &schedule, seed)?;
    finish(rows, seq, domain, exp, seed, start)
}

/// The learner proper. Sees the adversary only through values.
fn coordinate_loop(
    oracle: &dyn ValueOracle,
    g_bound: f64,
    domain: &Domain,
    exp: Exploration,
    schedule: &StepSchedule,
    seed: u64,
) -> Result<Vec<TwoPointRow>> {
    let dim = domain.dim();
    let mut rng = Rng::new(seed);
    let mut est = TwoPointEstimator::new(dim, exp.delta);
    let mut state = OogdState::new(domain, exp.shrink)?;
    let mut rows = Vec::with_capacity(oracle.horizon());
    for t in 1..=oracle.horizon() {
        let w = state.center().to_vec();
        let i = rng.sample_coordinate(dim);
        let (x_plus, x_minus) = query_points(&w, i, exp.delta);
        check_feasible(domain, t, &x_plus, &x_minus)?;
        let f_plus = oracle.value(t, &x_plus)?;
        let f_minus = oracle.value(t, &x_minus)?;
        let v = directional_value(f_plus, f_minus, exp.delta)?;
        check_lipschitz(t, v, g_bound)?;
        let g_tilde = est.optimism().to_vec();
        let e = est.update(t, i, v);
        let sizes =
            state.step_with(schedule, &e.g, &g_tilde, est.optimism(), domain, exp.shrink)?;
        rows.push(TwoPointRow {
            t,
            coord: Some(i),
            direction: None,
            w,
            x_plus,
            x_minus,
            f_plus,
            f_minus,
            v,
            eta: sizes.eta_t,
            innov_sq: e.innov_sq,
            g_sq: norm_sq(&e.g),
            opt_sq: norm_sq(&g_tilde),
        });
    }
    Ok(rows)
}

/// Sphere-sampling baseline: `g = (d / 2 delta)(f(w + delta u) - f(w - delta u)) u`,
/// `w <- P(w - g / (lambda t))`.
pub fn run_sphere_sgd(
    seq: &LossSequence,
    domain: &Domain,
    seed: u64,
    opts: &TwoPointOptions,
) -> Result<RunRecord> {
    let consts = seq.constants();
    if !(consts.lambda > 0.0) {
        return Err(Error::Config(
            "the sphere-sampling baseline needs a strongly convex adversary".into(),
        ));
    }
    let dim = domain.dim();
    let exp = exploration(dim, consts, domain, seq.horizon(), opts)?;
    let schedule = match opts.eta {
        Some(eta) => StepSchedule::Fixed { eta },
        None => StepSchedule::strongly_convex(consts.lambda)?,
    };
    schedule.validate()?;
    let start = opts.wallclock.then(Instant::now);
    let rows = sphere_loop(seq, consts.g, domain, exp, &schedule, seed)?;
    finish(rows, seq, domain, exp, seed, start)
}

fn sphere_loop(
    oracle: &dyn ValueOracle,
    g_bound: f64,
    domain: &Domain,
    exp: Exploration,
    schedule: &StepSchedule,
    seed: u64,
) -> Result<Vec<TwoPointRow>> {
    let dim = domain.dim();
    let d = dim as f64;
    let mut rng = Rng::new(seed);
    let mut w = domain.project(exp.shrink, &vec![0.0; dim])?;
    let mut rows = Vec::with_capacity(oracle.horizon());
    for t in 1..=oracle.horizon() {
        let u = rng.sample_unit_sphere(dim);
        let mut x_plus = w.clone();
        let mut x_minus = w.clone();
        axpy(exp.delta, &u, &mut x_plus);
        axpy(-exp.delta, &u, &mut x_minus);
        check_feasible(domain, t, &x_plus, &x_minus)?;
        let f_plus = oracle.value(t, &x_plus)?;
        let f_minus = oracle.value(t, &x_minus)?;
        let v = directional_value(f_plus, f_minus, exp.delta)?;
        check_lipschitz(t, v, g_bound)?;
        let g: Vec<f64> = u.iter().map(|ui| d * v * ui).collect();
        let g_sq = norm_sq(&g);
        let eta = schedule.eta(t, 0.0);
        let played = w.clone();
        axpy(-eta, &g, &mut w);
        domain.project_in_place(exp.shrink, &mut w);
        rows.push(TwoPointRow {
            t,
            coord: None,
            direction: Some(u),
            w: played,
            x_plus,
            x_minus,
            f_plus,
            f_minus,
            v,
            eta,
            innov_sq: g_sq,
            g_sq,
            opt_sq: 0.0,
        });
    }
    Ok(rows)
}

fn check_feasible(domain: &Domain, t: usize, a: &[f64], b: &[f64]) -> Result<()> {
    if !domain.contains(0.0, a, 1e-12) || !domain.contains(0.0, b, 1e-12) {
        return Err(Error::Precondition(format!(
            "round {t}: query point left the domain"
        )));
    }
    Ok(())
}

fn finish(
    rows: Vec<TwoPointRow>,
    seq: &LossSequence,
    domain: &Domain,
    exp: Exploration,
    seed: u64,
    start: Option<Instant>,
) -> Result<RunRecord> {
    let mut record = RunRecord {
        rows,
        summary: Summary::default(),
        delta: exp.delta,
        shrink: exp.shrink,
    };
    let reg = static_regret(&record, seq, domain, exp.shrink)?;
    let mut loss_center = 0.0;
    for r in &record.rows {
        loss_center += seq.value(r.t, &r.w)?;
    }
    let optional = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Unsupported(_)) => Ok(None),
        Err(e) => Err(e),
    };
    record.summary = Summary {
        seed,
        loss_avg: record
            .rows
            .iter()
            .map(|r| 0.5 * (r.f_plus + r.f_minus))
            .sum(),
        loss_center,
        regret_avg: reg.avg,
        regret_center: reg.center,
        v_t: optional(seq.gradient_variation(domain))?,
        vbar_t: record.vbar_from_rows(),
        f_t: optional(small_loss(seq, domain))?,
        w_t: Some(seq.variance_measure(&record.centers())?),
        wallclock_ms: start.map_or(0, |s| s.elapsed().as_millis() as u64),
        config_hash: String::new(),
    };
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::Family;

    #[test]
    fn empty_horizon() {
        let dom = Domain::ball(2, 1.0).unwrap();
        let seq = LossSequence::new(Family::LinearDrift { ls: vec![] }, 0, &dom).unwrap();
        let rec = run_two_point(
            Variant::GvConvex,
            &seq,
            &dom,
            1,
            &TwoPointOptions::default(),
        )
        .unwrap();
        assert!(rec.rows.is_empty());
        assert_eq!(rec.summary.regret_avg, 0.0);
        assert_eq!(rec.summary.regret_center, 0.0);
    }

    #[test]
    fn reproducible() {
        let dom = Domain::cube(2, 1.0).unwrap();
        let seq =
            LossSequence::new(Family::StationaryLinear { l: vec![0.6, -0.3] }, 1000, &dom).unwrap();
        let a = run_two_point(
            Variant::GvConvex,
            &seq,
            &dom,
            42,
            &TwoPointOptions::default(),
        )
        .unwrap();
        let b = run_two_point(
            Variant::GvConvex,
            &seq,
            &dom,
            42,
            &TwoPointOptions::default(),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn strongly_convex_needs_lambda() {
        let dom = Domain::cube(2, 1.0).unwrap();
        let seq =
            LossSequence::new(Family::StationaryLinear { l: vec![0.6, -0.3] }, 10, &dom).unwrap();
        let opts = TwoPointOptions::default();
        assert!(matches!(
            run_two_point(Variant::GvStronglyConvex, &seq, &dom, 1, &opts),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            run_sphere_sgd(&seq, &dom, 1, &opts),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn box_shrink_guard() {
        let dom = Domain::hyper_rectangle(vec![-2.0, -0.5], vec![2.0, 0.5]).unwrap();
        let seq =
            LossSequence::new(Family::StationaryLinear { l: vec![0.6, -0.3] }, 10, &dom).unwrap();
        let opts = TwoPointOptions {
            delta: Some(0.1),
            ..Default::default()
        };
        let e = exploration(2, seq.constants(), &dom, 10, &opts).unwrap();
        assert!((e.shrink - 0.2).abs() < 1e-15);
        run_two_point(Variant::Variance, &seq, &dom, 3, &opts).unwrap();
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("nope".parse::<Variant>().is_err());
    }

    #[test]
    fn sphere_estimate_is_exact_directional_derivative() {
        let dom = Domain::ball(3, 1.0).unwrap();
        let fam = crate::adversary::drift::circular_centers(1.0, &[0.1, 0.0, -0.2], 0.3, 16.0, 200);
        let seq = LossSequence::new(fam, 200, &dom).unwrap();
        let rec = run_sphere_sgd(&seq, &dom, 9, &TwoPointOptions::default()).unwrap();
        let g_bound = seq.constants().g;
        for r in &rec.rows {
            let u = r.direction.as_ref().unwrap();
            let grad = seq.gradient(r.t, &r.w).unwrap();
            let exact: f64 = grad.iter().zip(u).map(|(a, b)| a * b).sum();
            assert!(
                (r.v - exact).abs() < 1e-6 * (1.0 + exact.abs()),
                "{} vs {exact}",
                r.v
            );
            assert!(r.g_sq.sqrt() <= 3.0 * g_bound * (1.0 + 1e-9));
        }
    }
}
