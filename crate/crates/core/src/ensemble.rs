//! Meta-base ensembles sharing one two-point estimator.
//!
//! - Dynamic regret: base learners run optimistic OGD with fixed step sizes from a
//!   geometric pool; Optimistic-Hedge combines them on linearized losses with a
//!   movement penalty.
//! - Universal regret: strongly convex base learners over a `lambda` grid plus one
//!   convex and one linear learner, combined by Optimistic-Adapt-ML-Prod.
//!
//! Every round queries the combined center only, so the query budget is the same as
//! for a single learner.

use std::time::Instant;

use log::warn;

use crate::adversary::{LossSequence, ValueOracle};
use crate::bco2p::{exploration, Exploration, TwoPointOptions};
use crate::error::{Error, Result};
use crate::estimator2p::{check_lipschitz, directional_value, query_points, TwoPointEstimator};
use crate::geometry::{Domain, Rng};
use crate::linalg::{dist_sq, dot};
use crate::metrics::{dynamic_regret, path_length, static_regret};
use crate::oogd::{ln_horizon, OogdState, StepSchedule};
use crate::record::{RunRecord, Summary, TwoPointRow};

/// `eta_i = min(R / (16 L sqrt(d^3 ln T)), sqrt(R^2 / (d^3 T ln d)) 2^{i-1})`, grown
/// until the cap is reached; the cap is the last entry. `ln d` is replaced by 1
/// for `d = 1`.
pub fn dynamic_pool(r: f64, l: f64, dim: usize, horizon: usize) -> Vec<f64> {
    let d = dim as f64;
    let cap = r / (16.0 * l * (d.powi(3) * ln_horizon(horizon)).sqrt());
    let base = dynamic_pool_base(r, dim, horizon);
    let mut pool = Vec::new();
    let mut eta = base;
    while eta < cap {
        pool.push(eta);
        eta *= 2.0;
    }
    pool.push(cap);
    pool
}

/// The uncapped first entry `sqrt(R^2 / (d^3 T ln d))`.
pub fn dynamic_pool_base(r: f64, dim: usize, horizon: usize) -> f64 {
    let d = dim as f64;
    let ln_d = if dim == 1 { 1.0 } else { d.ln() };
    (r * r / (d.powi(3) * horizon.max(1) as f64 * ln_d)).sqrt()
}

/// `{2^k / T : k = 0..=ceil(log2 T)}`.
pub fn sc_pool(horizon: usize) -> Vec<f64> {
    let t = horizon.max(2);
    let k_max = (t as f64).log2().ceil() as i32;
    (0..=k_max).map(|k| 2f64.powi(k) / t as f64).collect()
}

fn softmax_from_logs(logs: &[f64]) -> Vec<f64> {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logs.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// `p_i ∝ exp(-eps (cum_i + m_i))`, computed with the largest exponent removed.
pub fn optimistic_hedge_weights(cumulative: &[f64], m_next: &[f64], eps: f64) -> Vec<f64> {
    let logs: Vec<f64> = cumulative
        .iter()
        .zip(m_next)
        .map(|(c, m)| -eps * (c + m))
        .collect();
    softmax_from_logs(&logs)
}

/// Optimistic-Hedge with `eps_t = sqrt(ln N / (C0^2 + sum_{s<t} ||l_s - m_s||_inf^2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HedgeMeta {
    c0: f64,
    cumulative: Vec<f64>,
    /// `sum_{s<t} ||l_s - m_s||_inf^2`.
    sum_sq: f64,
    /// Optimism for the round about to be played.
    m_current: Vec<f64>,
    p: Vec<f64>,
    eps: f64,
}

impl HedgeMeta {
    pub fn new(n: usize, c0: f64) -> Self {
        Self {
            c0,
            cumulative: vec![0.0; n],
            sum_sq: 0.0,
            m_current: vec![0.0; n],
            p: vec![1.0 / n as f64; n],
            eps: f64::NAN,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.p
    }

    /// Learning rate used by the latest update.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Feed round `t`'s losses and the next optimism; returns `p_{t+1}`.
    pub fn update(&mut self, loss: &[f64], m_next: &[f64]) -> &[f64] {
        let n = self.p.len();
        self.cumulative
            .iter_mut()
            .zip(loss)
            .for_each(|(c, l)| *c += l);
        if n == 1 {
            self.p = vec![1.0];
        } else {
            self.eps = ((n as f64).ln() / (self.c0 * self.c0 + self.sum_sq)).sqrt();
            self.p = optimistic_hedge_weights(&self.cumulative, m_next, self.eps);
        }
        let gap = loss
            .iter()
            .zip(&self.m_current)
            .map(|(l, m)| (l - m).abs())
            .fold(0.0, f64::max);
        self.sum_sq += gap * gap;
        self.m_current = m_next.to_vec();
        &self.p
    }
}

/// Optimistic-Adapt-ML-Prod with per-expert learning rates; potentials in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct MlProdMeta {
    log_w: Vec<f64>,
    eps: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl MlProdMeta {
    pub fn new(n: usize) -> Self {
        Self {
            log_w: vec![-(n as f64).ln(); n],
            eps: vec![0.125; n],
            sum_sq: vec![0.0; n],
        }
    }

    pub fn from_parts(log_w: Vec<f64>, eps: Vec<f64>, sum_sq: Vec<f64>) -> Self {
        Self { log_w, eps, sum_sq }
    }

    pub fn log_potentials(&self) -> &[f64] {
        &self.log_w
    }

    pub fn learning_rates(&self) -> &[f64] {
        &self.eps
    }

    /// `p_i ∝ eps_i exp(eps_i m_i) W_i`.
    pub fn weights(&self, m_next: &[f64]) -> Vec<f64> {
        if self.log_w.len() == 1 {
            return vec![1.0];
        }
        let logs: Vec<f64> = (0..self.log_w.len())
            .map(|i| self.eps[i].ln() + self.eps[i] * m_next[i] + self.log_w[i])
            .collect();
        softmax_from_logs(&logs)
    }

    /// Potential and learning-rate update with instantaneous regrets `r` and the
    /// optimism `m` that was used for them.
    pub fn update(&mut self, r: &[f64], m: &[f64]) {
        let n = self.log_w.len() as f64;
        for i in 0..self.log_w.len() {
            let dev = r[i] - m[i];
            let prev = self.eps[i];
            self.sum_sq[i] += dev * dev;
            let next = if self.sum_sq[i] > 0.0 {
                (n.ln() / self.sum_sq[i]).sqrt().min(0.125)
            } else {
                0.125
            };
            self.log_w[i] = (next / prev) * (self.log_w[i] + prev * r[i] - prev * prev * dev * dev);
            self.eps[i] = next;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpertKind {
    StronglyConvex { lambda: f64 },
    Convex,
    Linear,
}

/// Solution of `z = <g~, w(z)>` for the universal meta optimism.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub z: f64,
    pub m: Vec<f64>,
    pub p: Vec<f64>,
    pub w: Vec<f64>,
    pub residual: f64,
    /// Bisection failed to bracket and the previous `z` was reused.
    pub fallback: bool,
}

/// Optimism `m_i = 0` for strongly convex experts and `(z - <g~, w_i>) / scale` for
/// the others, where `z = <g~, w(z)>` and `w(z)` is the weighted combination.
/// Bisection on `[-bound, bound]` to `tol`, with a damped iteration if the bracket
/// has no sign change.
pub fn universal_optimism_fixed_point(
    g_tilde: &[f64],
    bases: &[Vec<f64>],
    kinds: &[ExpertKind],
    meta: &MlProdMeta,
    scale: f64,
    bound: f64,
    tol: f64,
    prev_z: f64,
) -> FixedPoint {
    let inner: Vec<f64> = bases.iter().map(|w| dot(g_tilde, w)).collect();
    let eval = |z: f64| {
        let m: Vec<f64> = kinds
            .iter()
            .zip(&inner)
            .map(|(k, gi)| match k {
                ExpertKind::StronglyConvex { .. } => 0.0,
                _ => (z - gi) / scale,
            })
            .collect();
        let p = meta.weights(&m);
        let image: f64 = p.iter().zip(&inner).map(|(pi, gi)| pi * gi).sum();
        (m, p, image)
    };
    let finish = |z: f64, fallback: bool| {
        let (m, p, image) = eval(z);
        let d = bases.first().map_or(0, |b| b.len());
        let mut w = vec![0.0; d];
        for (pi, b) in p.iter().zip(bases) {
            w.iter_mut().zip(b).for_each(|(x, y)| *x += pi * y);
        }
        FixedPoint {
            z,
            residual: (image - z).abs(),
            m,
            p,
            w,
            fallback,
        }
    };
    let phi = |z: f64| eval(z).2 - z;
    let (mut lo, mut hi) = (-bound, bound);
    let (flo, fhi) = (phi(lo), phi(hi));
    if flo >= 0.0 && fhi <= 0.0 {
        if flo == 0.0 {
            return finish(lo, false);
        }
        if fhi == 0.0 {
            return finish(hi, false);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let f = phi(mid);
            if f.abs() <= tol || hi - lo <= tol {
                return finish(mid, false);
            }
            if f > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return finish(0.5 * (lo + hi), false);
    }
    let mut z = prev_z;
    for _ in 0..50 {
        z = 0.5 * (z + eval(z).2);
        if phi(z).abs() <= tol {
            return finish(z, false);
        }
    }
    warn!("universal optimism: no fixed point located, reusing the previous value");
    finish(prev_z, true)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnsembleOptions {
    pub two_point: TwoPointOptions,
    /// Replace the dynamic step-size pool.
    pub pool: Option<Vec<f64>>,
    /// Replace the universal strong-convexity grid.
    pub lambda_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRow {
    pub t: usize,
    pub weights: Vec<f64>,
    pub meta_loss: Vec<f64>,
    pub dominant: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnsembleSummary {
    pub dynamic_regret: Option<f64>,
    pub path_length: Option<f64>,
    /// Largest `|sum p - 1|` or negative weight seen.
    pub max_simplex_error: f64,
    /// Largest distance of a raw meta loss outside `[0, 1]`.
    pub max_preclip_violation: f64,
    pub clips: usize,
    pub fallbacks: usize,
    pub max_fixed_point_residual: f64,
    pub experts: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnsembleRecord {
    /// Combined-center trace in the two-point schema.
    pub run: RunRecord,
    pub meta: Vec<EnsembleRow>,
    pub summary: EnsembleSummary,
    pub pool: Vec<f64>,
}

fn simplex_error(p: &[f64]) -> f64 {
    let s: f64 = p.iter().sum();
    let neg = p.iter().cloned().fold(0.0f64, |a, v| a.max(-v));
    (s - 1.0).abs().max(neg)
}

fn argmax(p: &[f64]) -> usize {
    p.iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > p[best] { i } else { best })
}

fn combine(p: &[f64], bases: &[OogdState], dim: usize) -> Vec<f64> {
    let mut w = vec![0.0; dim];
    for (pi, b) in p.iter().zip(bases) {
        w.iter_mut().zip(b.center()).for_each(|(x, y)| *x += pi * y);
    }
    w
}

struct Query {
    row: TwoPointRow,
    g: Vec<f64>,
    g_tilde: Vec<f64>,
}

fn query(
    oracle: &dyn ValueOracle,
    g_bound: f64,
    domain: &Domain,
    exp: Exploration,
    est: &mut TwoPointEstimator,
    rng: &mut Rng,
    t: usize,
    w: Vec<f64>,
) -> Result<Query> {
    let i = rng.sample_coordinate(domain.dim());
    let (x_plus, x_minus) = query_points(&w, i, exp.delta);
    if !domain.contains(0.0, &x_plus, 1e-12) || !domain.contains(0.0, &x_minus, 1e-12) {
        return Err(Error::Precondition(format!(
            "round {t}: query point left the domain"
        )));
    }
    let f_plus = oracle.value(t, &x_plus)?;
    let f_minus = oracle.value(t, &x_minus)?;
    let v = directional_value(f_plus, f_minus, exp.delta)?;
    check_lipschitz(t, v, g_bound)?;
    let g_tilde = est.optimism().to_vec();
    let e = est.update(t, i, v);
    let row = TwoPointRow {
        t,
        coord: Some(i),
        direction: None,
        w,
        x_plus,
        x_minus,
        f_plus,
        f_minus,
        v,
        eta: f64::NAN,
        innov_sq: e.innov_sq,
        g_sq: e.g.iter().map(|x| x * x).sum(),
        opt_sq: g_tilde.iter().map(|x| x * x).sum(),
    };
    Ok(Query {
        row,
        g: e.g,
        g_tilde,
    })
}

/// Dynamic-regret ensemble. Dynamic regret is measured against
/// [`LossSequence::comparators`] over the shrunk domain.
pub fn run_dynamic(
    seq: &LossSequence,
    domain: &Domain,
    seed: u64,
    opts: &EnsembleOptions,
) -> Result<EnsembleRecord> {
    let consts = seq.constants();
    let horizon = seq.horizon();
    let dim = domain.dim();
    let exp = exploration(dim, consts, domain, horizon, &opts.two_point)?;
    let r = domain.circumradius();
    let pool = opts
        .pool
        .clone()
        .unwrap_or_else(|| dynamic_pool(r, consts.l, dim, horizon));
    if pool.is_empty() || pool.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Config(
            "step-size pool must be nonempty and positive".into(),
        ));
    }
    let n = pool.len();
    let d3 = (dim as f64).powi(3);
    let ln_t = ln_horizon(horizon);
    let c0 = 16.0 * r.powi(3) * (d3 * ln_t * (n as f64).ln()).sqrt();
    let gamma = 4.0 * r * consts.l * (d3 * ln_t).sqrt();
    let start = opts.two_point.wallclock.then(Instant::now);

    let oracle: &dyn ValueOracle = seq;
    let mut rng = Rng::new(seed);
    let mut est = TwoPointEstimator::new(dim, exp.delta);
    let mut bases: Vec<OogdState> = (0..n)
        .map(|_| OogdState::new(domain, exp.shrink))
        .collect::<Result<_>>()?;
    let schedules: Vec<StepSchedule> = pool
        .iter()
        .map(|&eta| StepSchedule::Fixed { eta })
        .collect();
    let mut meta = HedgeMeta::new(n, c0);
    let mut prev: Vec<Vec<f64>> = bases.iter().map(|b| b.center().to_vec()).collect();
    let mut rows = Vec::with_capacity(horizon);
    let mut meta_rows = Vec::with_capacity(horizon);
    let mut summary = EnsembleSummary {
        experts: n,
        ..Default::default()
    };

    for t in 1..=horizon {
        let p = meta.weights().to_vec();
        summary.max_simplex_error = summary.max_simplex_error.max(simplex_error(&p));
        let w = combine(&p, &bases, dim);
        let q = query(oracle, consts.g, domain, exp, &mut est, &mut rng, t, w)?;
        let current: Vec<Vec<f64>> = bases.iter().map(|b| b.center().to_vec()).collect();
        for (b, s) in bases.iter_mut().zip(&schedules) {
            b.step_with(s, &q.g, &q.g_tilde, est.optimism(), domain, exp.shrink)?;
        }
        let loss: Vec<f64> = (0..n)
            .map(|i| dot(&q.g, &current[i]) + gamma * dist_sq(&current[i], &prev[i]))
            .collect();
        let m_next: Vec<f64> = (0..n)
            .map(|i| {
                dot(est.optimism(), bases[i].center())
                    + gamma * dist_sq(bases[i].center(), &current[i])
            })
            .collect();
        meta.update(&loss, &m_next);
        prev = current;
        rows.push(q.row);
        meta_rows.push(EnsembleRow {
            t,
            dominant: argmax(&p),
            weights: p,
            meta_loss: loss,
        });
    }
    finish(
        seq, domain, exp, seed, start, rows, meta_rows, summary, pool,
    )
}

/// Universal ensemble over strongly convex, convex and linear base learners.
pub fn run_universal(
    seq: &LossSequence,
    domain: &Domain,
    seed: u64,
    opts: &EnsembleOptions,
) -> Result<EnsembleRecord> {
    let consts = seq.constants();
    let horizon = seq.horizon();
    let dim = domain.dim();
    let d = dim as f64;
    let exp = exploration(dim, consts, domain, horizon, &opts.two_point)?;
    let r = domain.circumradius();
    let grid = opts.lambda_grid.clone().unwrap_or_else(|| sc_pool(horizon));
    if grid.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::Config(
            "strong-convexity grid must be positive".into(),
        ));
    }
    let mut kinds: Vec<ExpertKind> = grid
        .iter()
        .map(|&lambda| ExpertKind::StronglyConvex { lambda })
        .collect();
    kinds.push(ExpertKind::Convex);
    kinds.push(ExpertKind::Linear);
    let n = kinds.len();
    let scale = 2.0 * 10f64.sqrt() * d * consts.g * r;
    if !(scale > 0.0) {
        return Err(Error::Config(
            "meta-loss scale needs positive G and R".into(),
        ));
    }
    let bound = d.sqrt() * consts.g * r;
    let tol = 1.0 / horizon.max(1) as f64;
    let flat = StepSchedule::AdaptiveSqrt {
        r: 2.0 * r,
        c: d * d,
    };
    let start = opts.two_point.wallclock.then(Instant::now);

    let oracle: &dyn ValueOracle = seq;
    let mut rng = Rng::new(seed);
    let mut est = TwoPointEstimator::new(dim, exp.delta);
    let mut bases: Vec<OogdState> = (0..n)
        .map(|_| OogdState::new(domain, exp.shrink))
        .collect::<Result<_>>()?;
    // Curvature correction of each strongly convex learner's optimism:
    // (lambda_i / 2)(w_{t-1,i} - w_{t-1}); zero in the first round.
    let mut corrections: Vec<Vec<f64>> = vec![vec![0.0; dim]; n];
    let mut meta = MlProdMeta::new(n);
    let mut z = 0.0;
    let mut rows = Vec::with_capacity(horizon);
    let mut meta_rows = Vec::with_capacity(horizon);
    let mut summary = EnsembleSummary {
        experts: n,
        ..Default::default()
    };

    for t in 1..=horizon {
        let current: Vec<Vec<f64>> = bases.iter().map(|b| b.center().to_vec()).collect();
        let fp = universal_optimism_fixed_point(
            est.optimism(),
            &current,
            &kinds,
            &meta,
            scale,
            bound,
            tol,
            z,
        );
        z = fp.z;
        summary.fallbacks += fp.fallback as usize;
        summary.max_fixed_point_residual = summary.max_fixed_point_residual.max(fp.residual);
        summary.max_simplex_error = summary.max_simplex_error.max(simplex_error(&fp.p));
        let w = fp.w.clone();
        let q = query(
            oracle,
            consts.g,
            domain,
            exp,
            &mut est,
            &mut rng,
            t,
            w.clone(),
        )?;

        let mut loss = Vec::with_capacity(n);
        for wi in &current {
            let raw = dot(&q.g, wi) / scale + 0.5;
            let violation = (-raw).max(raw - 1.0).max(0.0);
            if violation > 0.0 {
                summary.max_preclip_violation = summary.max_preclip_violation.max(violation);
                summary.clips += 1;
            }
            loss.push(raw.clamp(0.0, 1.0));
        }
        let mixed: f64 = fp.p.iter().zip(&loss).map(|(p, l)| p * l).sum();
        let regrets: Vec<f64> = loss.iter().map(|l| mixed - l).collect();
        meta.update(&regrets, &fp.m);

        for (i, base) in bases.iter_mut().enumerate() {
            match kinds[i] {
                ExpertKind::StronglyConvex { lambda } => {
                    let offset: Vec<f64> = current[i]
                        .iter()
                        .zip(&w)
                        .map(|(a, b)| 0.5 * lambda * (a - b))
                        .collect();
                    let grad: Vec<f64> = q.g.iter().zip(&offset).map(|(g, o)| g + o).collect();
                    let hint: Vec<f64> = q
                        .g_tilde
                        .iter()
                        .zip(&corrections[i])
                        .map(|(g, c)| g + c)
                        .collect();
                    let next: Vec<f64> = est
                        .optimism()
                        .iter()
                        .zip(&offset)
                        .map(|(g, o)| g + o)
                        .collect();
                    let s = StepSchedule::InverseLinear { lambda, scale: 2.0 };
                    base.step_with(&s, &grad, &hint, &next, domain, exp.shrink)?;
                    corrections[i] = offset;
                }
                ExpertKind::Convex | ExpertKind::Linear => {
                    base.step_with(&flat, &q.g, &q.g_tilde, est.optimism(), domain, exp.shrink)?;
                }
            }
        }
        rows.push(q.row);
        meta_rows.push(EnsembleRow {
            t,
            dominant: argmax(&fp.p),
            weights: fp.p,
            meta_loss: loss,
        });
    }
    finish(
        seq, domain, exp, seed, start, rows, meta_rows, summary, grid,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish(
    seq: &LossSequence,
    domain: &Domain,
    exp: Exploration,
    seed: u64,
    start: Option<Instant>,
    rows: Vec<TwoPointRow>,
    meta: Vec<EnsembleRow>,
    mut summary: EnsembleSummary,
    pool: Vec<f64>,
) -> Result<EnsembleRecord> {
    let mut run = RunRecord {
        rows,
        summary: Summary::default(),
        delta: exp.delta,
        shrink: exp.shrink,
    };
    let reg = static_regret(&run, seq, domain, exp.shrink)?;
    let centers = run.centers();
    let comparators = seq.comparators(domain, exp.shrink)?;
    summary.dynamic_regret = Some(dynamic_regret(seq, &centers, &comparators)?);
    summary.path_length = Some(path_length(&comparators));
    let mut loss_center = 0.0;
    for r in &run.rows {
        loss_center += seq.value(r.t, &r.w)?;
    }
    run.summary = Summary {
        seed,
        loss_avg: run.rows.iter().map(|r| 0.5 * (r.f_plus + r.f_minus)).sum(),
        loss_center,
        regret_avg: reg.avg,
        regret_center: reg.center,
        v_t: seq.gradient_variation(domain).ok(),
        vbar_t: run.vbar_from_rows(),
        f_t: None,
        w_t: None,
        wallclock_ms: start.map_or(0, |s| s.elapsed().as_millis() as u64),
        config_hash: String::new(),
    };
    Ok(EnsembleRecord {
        run,
        meta,
        summary,
        pool,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_examples() {
        let base = dynamic_pool_base(1.0, 2, 1024);
        assert!((base - (1.0 / (8.0 * 1024.0 * 2f64.ln())).sqrt()).abs() < 1e-15);
        assert!((base - 0.01327).abs() < 5e-6);
        // Here the uncapped first entry already exceeds the cap.
        let pool = dynamic_pool(1.0, 1.0, 2, 1024);
        let cap = 1.0 / (16.0 * (8.0 * 1024f64.ln()).sqrt());
        assert_eq!(pool, vec![cap]);
        let pool = dynamic_pool(1.0, 1.0, 2, 1 << 20);
        assert!(pool.len() > 1);
        assert!(pool.windows(2).all(|w| w[0] < w[1]));
        let cap = 1.0 / (16.0 * (8.0 * ((1u64 << 20) as f64).ln()).sqrt());
        assert_eq!(*pool.last().unwrap(), cap);
        assert!(pool.iter().all(|e| *e <= cap));
        assert!(dynamic_pool_base(1.0, 1, 100).is_finite());
    }

    #[test]
    fn sc_pool_examples() {
        assert_eq!(sc_pool(8), vec![0.125, 0.25, 0.5, 1.0]);
        let g = sc_pool(1000);
        assert_eq!(g.len(), 11);
        assert!(g.windows(2).all(|w| w[1] == 2.0 * w[0]));
        assert!(*g.last().unwrap() >= 1.0);
        for k in 0..100 {
            let lambda = 1.0 / 1000.0 + k as f64 * (1.0 - 1e-3) / 99.0;
            assert!(g.iter().any(|&l| l <= lambda && lambda <= 2.0 * l));
        }
    }

    #[test]
    fn hedge_examples() {
        let p = optimistic_hedge_weights(&[0.0, 10.0], &[0.0, 0.0], 1.0);
        let e = (-10f64).exp();
        assert!((p[0] - 1.0 / (1.0 + e)).abs() < 1e-15 && (p[1] - e / (1.0 + e)).abs() < 1e-15);
        let shifted = optimistic_hedge_weights(&[5.0, 15.0], &[0.0, 0.0], 1.0);
        assert!((p[0] - shifted[0]).abs() < 1e-15);
        let mut h = HedgeMeta::new(3, 2.0);
        for _ in 0..10 {
            h.update(&[0.4, 0.4, 0.4], &[0.1, 0.1, 0.1]);
            assert!(h.weights().iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
        }
        let huge = optimistic_hedge_weights(&[1e300, 1e300], &[0.0, 0.0], 1.0);
        assert!(huge.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn hedge_without_optimism_is_exponential_weights() {
        let mut h = HedgeMeta::new(2, 1.5);
        let losses = [[0.3, 0.7], [0.9, 0.1], [0.5, 0.4], [0.2, 0.8]];
        let mut cum = [0.0f64; 2];
        let mut sq = 0.0f64;
        for l in &losses {
            cum[0] += l[0];
            cum[1] += l[1];
            let eps = (2f64.ln() / (1.5 * 1.5 + sq)).sqrt();
            let a = (-eps * cum[0]).exp();
            let b = (-eps * cum[1]).exp();
            let p = h.update(l, &[0.0, 0.0]).to_vec();
            assert!((p[0] - a / (a + b)).abs() < 1e-14);
            sq += l[0].abs().max(l[1].abs()).powi(2);
        }
    }

    #[test]
    fn mlprod_single_step_oracle() {
        let mut meta = MlProdMeta::from_parts(vec![0.5f64.ln(); 2], vec![0.125; 2], vec![0.0; 2]);
        let r = [0.2, -0.2];
        meta.update(&r, &[0.0, 0.0]);
        // sum (r - m)^2 = 0.04, so eps_1 = min(1/8, sqrt(ln 2 / 0.04)) = 1/8.
        for i in 0..2 {
            let expect = 0.5f64.ln() + 0.125 * r[i] - 0.125f64.powi(2) * r[i] * r[i];
            assert!((meta.log_potentials()[i] - expect).abs() < 1e-12);
        }
        let p = meta.weights(&[0.0, 0.0]);
        let a = (0.5f64.ln() + 0.125 * 0.2 - 0.015625 * 0.04).exp();
        let b = (0.5f64.ln() - 0.125 * 0.2 - 0.015625 * 0.04).exp();
        assert!((p[0] - a / (a + b)).abs() < 1e-12);
    }

    #[test]
    fn mlprod_symmetric_and_idle() {
        let mut meta = MlProdMeta::new(2);
        for _ in 0..20 {
            meta.update(&[0.1, 0.1], &[0.0, 0.0]);
            let p = meta.weights(&[0.0, 0.0]);
            assert!((p[0] - 0.5).abs() < 1e-15);
        }
        let mut idle = MlProdMeta::new(3);
        let before = idle.weights(&[0.0; 3]);
        idle.update(&[0.0; 3], &[0.0; 3]);
        assert_eq!(idle.weights(&[0.0; 3]), before);
    }

    #[test]
    fn fixed_point_degenerate_cases() {
        let kinds = [
            ExpertKind::StronglyConvex { lambda: 0.5 },
            ExpertKind::Convex,
            ExpertKind::Linear,
        ];
        let meta = MlProdMeta::new(3);
        let bases = vec![vec![0.1, 0.2], vec![-0.3, 0.4], vec![0.5, -0.5]];
        let fp = universal_optimism_fixed_point(
            &[0.0, 0.0],
            &bases,
            &kinds,
            &meta,
            10.0,
            3.0,
            1e-6,
            0.0,
        );
        assert!(fp.m.iter().all(|m| *m == 0.0));
        let same = vec![vec![0.1, 0.2]; 3];
        let fp = universal_optimism_fixed_point(
            &[1.0, -2.0],
            &same,
            &kinds,
            &meta,
            10.0,
            3.0,
            1e-9,
            0.0,
        );
        assert!(fp.m.iter().all(|m| m.abs() < 1e-9));
        assert!(fp.residual < 1e-9);
    }
}
