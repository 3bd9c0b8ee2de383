//! One-point bandit linear optimization over boxes.
//!
//! Log-barrier FTRL with an optimistic one-point estimator. Each round plays
//! `x = w + eps lambda_i^{-1/2} e_i` for a random coordinate `i` and sign `eps`,
//! where `lambda_i` is the barrier Hessian eigenvalue at `w`. The estimator
//! subtracts the last value observed for the same `(i, eps)` pair:
//! `g = d (v - r^eps_i) eps lambda_i^{1/2} e_i + g~`, with
//! `g~ = 1/2 sum_i lambda_i^{1/2} (r^+_i - r^-_i) e_i`.
//!
//! The FTRL step separates into one monotone scalar equation per coordinate,
//! `eta (S_i + c_i sqrt(f''(x))) + f'(x) = 0`, solved by bisection.

use std::time::Instant;

use log::warn;

use crate::adversary::{LossSequence, ValueOracle};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Rng};
use crate::oogd::ln_horizon;

const MAX_BISECTIONS: usize = 200;

/// `(b - w)^-2 + (w - a)^-2`.
pub fn barrier_eigen(w: f64, a: f64, b: f64) -> Result<f64> {
    if !(a < w && w < b) {
        return Err(Error::Domain(format!(
            "{w} is not strictly inside ({a}, {b})"
        )));
    }
    Ok((b - w).powi(-2) + (w - a).powi(-2))
}

/// `F(x) = eta (s + c sqrt(f''(x))) + f'(x)` for the barrier `f = -ln(b-x) - ln(x-a)`.
pub fn fixed_point_residual(x: f64, s: f64, c: f64, eta: f64, a: f64, b: f64) -> f64 {
    let f1 = 1.0 / (b - x) - 1.0 / (x - a);
    let f2 = (b - x).powi(-2) + (x - a).powi(-2);
    eta * (s + c * f2.sqrt()) + f1
}

/// Unique root of [`fixed_point_residual`] on `(a, b)`, by bisection until
/// `|F| <= tol` or the bracket is narrower than `tol`.
pub fn solve_coordinate(s: f64, c: f64, eta: f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !((eta * c).abs() < 1.0) {
        return Err(Error::Precondition(format!(
            "|eta c| = {} must be below 1",
            (eta * c).abs()
        )));
    }
    if !(a < b) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad bracket ({a}, {b}) or tolerance {tol}"
        )));
    }
    let (mut lo, mut hi) = (a, b);
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + 0.5 * (hi - lo);
        if !(a < mid && mid < b) {
            return Err(Error::Numeric(format!(
                "bisection reached the boundary of ({a}, {b})"
            )));
        }
        let f = fixed_point_residual(mid, s, c, eta, a, b);
        if f.abs() <= tol || hi - lo <= tol {
            return Ok(mid);
        }
        if f > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::Numeric(format!(
        "bisection did not converge in {MAX_BISECTIONS} steps"
    )))
}

/// One round's randomized action.
#[derive(Debug, Clone, PartialEq)]
pub struct Play {
    pub coord: usize,
    pub sign: f64,
    pub x: Vec<f64>,
    /// Buffered value `r^sign_coord` fetched before the round.
    pub z: f64,
    pub lambda: f64,
}

/// Log-barrier FTRL state over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierLearner {
    lower: Vec<f64>,
    upper: Vec<f64>,
    w: Vec<f64>,
    gsum: Vec<f64>,
    r_plus: Vec<f64>,
    r_minus: Vec<f64>,
    eta: f64,
    tol: f64,
    halvings: usize,
}

impl BarrierLearner {
    /// Starts at the origin, or at the box midpoint when the origin is on the
    /// boundary.
    pub fn new(domain: &Domain, eta: f64, tol: f64) -> Result<Self> {
        let (lower, upper) = domain.bounds().ok_or_else(|| {
            Error::Config("one-point learners need a hyper-rectangle domain".into())
        })?;
        if lower.iter().zip(upper).any(|(l, u)| *l > 0.0 || *u < 0.0) {
            return Err(Error::Config(
                "one-point learners need lower <= 0 <= upper on every side".into(),
            ));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::Config(format!(
                "step size must be positive, got {eta}"
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::Config(format!(
                "solver tolerance must be positive, got {tol}"
            )));
        }
        let w = lower
            .iter()
            .zip(upper)
            .map(|(l, u)| {
                if *l < 0.0 && *u > 0.0 {
                    0.0
                } else {
                    0.5 * (l + u)
                }
            })
            .collect();
        let d = lower.len();
        Ok(Self {
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            w,
            gsum: vec![0.0; d],
            r_plus: vec![0.0; d],
            r_minus: vec![0.0; d],
            eta,
            tol,
            halvings: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn iterate(&self) -> &[f64] {
        &self.w
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Number of coordinate solves that needed a smaller step size.
    pub fn halvings(&self) -> usize {
        self.halvings
    }

    pub fn buffers(&self) -> (&[f64], &[f64]) {
        (&self.r_plus, &self.r_minus)
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.gsum
    }

    /// Overwrite the state; test and diagnostic use.
    pub fn set_state(&mut self, w: Vec<f64>, r_plus: Vec<f64>, r_minus: Vec<f64>) -> Result<()> {
        for i in 0..self.dim() {
            barrier_eigen(w[i], self.lower[i], self.upper[i])?;
        }
        self.w = w;
        self.r_plus = r_plus;
        self.r_minus = r_minus;
        Ok(())
    }

    fn lambda(&self, i: usize) -> f64 {
        (self.upper[i] - self.w[i]).powi(-2) + (self.w[i] - self.lower[i]).powi(-2)
    }

    /// `g~` at the current iterate.
    pub fn optimism(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| 0.5 * self.lambda(i).sqrt() * (self.r_plus[i] - self.r_minus[i]))
            .collect()
    }

    /// `w + sign lambda_i^{-1/2} e_i`.
    pub fn play_action(&self, coord: usize, sign: f64) -> Play {
        let lambda = self.lambda(coord);
        let mut x = self.w.clone();
        x[coord] += sign / lambda.sqrt();
        let z = if sign > 0.0 {
            self.r_plus[coord]
        } else {
            self.r_minus[coord]
        };
        Play {
            coord,
            sign,
            x,
            z,
            lambda,
        }
    }

    pub fn draw(&self, rng: &mut Rng) -> Play {
        let coord = rng.sample_coordinate(self.dim());
        let sign = rng.sample_sign();
        self.play_action(coord, sign)
    }

    /// Estimate without touching the state: `d (v - z) sign lambda^{1/2} e_i + g~`.
    pub fn estimate(&self, play: &Play, v: f64, g_tilde: &[f64]) -> Vec<f64> {
        let mut g = g_tilde.to_vec();
        g[play.coord] += self.dim() as f64 * (v - play.z) * play.sign * play.lambda.sqrt();
        g
    }

    /// Consume the observed value: estimate, overwrite the buffer, accumulate and
    /// solve for the next iterate. Returns `g_t`.
    pub fn observe(&mut self, play: &Play, v: f64) -> Result<Vec<f64>> {
        let g_tilde = self.optimism();
        let g = self.estimate(play, v, &g_tilde);
        if play.sign > 0.0 {
            self.r_plus[play.coord] = v;
        } else {
            self.r_minus[play.coord] = v;
        }
        self.gsum.iter_mut().zip(&g).for_each(|(s, gi)| *s += gi);
        self.solve_all()?;
        Ok(g)
    }

    fn solve_all(&mut self) -> Result<()> {
        for i in 0..self.dim() {
            let c = 0.5 * (self.r_plus[i] - self.r_minus[i]);
            let mut eta = self.eta;
            while (eta * c).abs() >= 1.0 {
                eta *= 0.5;
                self.halvings += 1;
                warn!("coordinate {i}: |eta c| >= 1, halving the step size to {eta}");
            }
            self.w[i] =
                solve_coordinate(self.gsum[i], c, eta, self.lower[i], self.upper[i], self.tol)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OnePointOptions {
    pub eta: Option<f64>,
    /// Variation used by the default step size instead of the true one.
    pub v_t: Option<f64>,
    /// Bisection tolerance, `1/T` by default.
    pub tol: Option<f64>,
    pub wallclock: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnePointRow {
    pub t: usize,
    pub coord: usize,
    pub sign: f64,
    pub w: Vec<f64>,
    pub x: Vec<f64>,
    pub v: f64,
    pub z: f64,
    pub g: Vec<f64>,
    pub g_tilde: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OnePointSummary {
    pub seed: u64,
    /// `sum <l_t, x_t>`.
    pub loss: f64,
    /// `sum <l_t, w_t>`.
    pub loss_center: f64,
    pub regret: f64,
    pub regret_center: f64,
    pub v_t: f64,
    pub eta: f64,
    pub halvings: usize,
    pub wallclock_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OnePointRecord {
    pub rows: Vec<OnePointRow>,
    pub summary: OnePointSummary,
}

/// `1 / (8 R G d^2 sqrt(V_T ln T))` with `V_T` floored at 1 so that stationary
/// sequences get a finite step.
pub fn default_eta(radius: f64, g: f64, dim: usize, v_t: f64, horizon: usize) -> f64 {
    let d = dim as f64;
    1.0 / (8.0
        * radius
        * g.max(f64::MIN_POSITIVE)
        * d
        * d
        * (v_t.max(1.0) * ln_horizon(horizon)).sqrt())
}

pub fn run_one_point(
    seq: &LossSequence,
    domain: &Domain,
    seed: u64,
    opts: &OnePointOptions,
) -> Result<OnePointRecord> {
    if !seq.is_linear() {
        return Err(Error::Config(
            "one-point learners need a linear adversary".into(),
        ));
    }
    let horizon = seq.horizon();
    let v_t = seq.gradient_variation(domain)?;
    let eta = match opts.eta {
        Some(e) => e,
        None => default_eta(
            domain.circumradius(),
            seq.constants().g,
            domain.dim(),
            opts.v_t.unwrap_or(v_t),
            horizon,
        ),
    };
    let tol = opts.tol.unwrap_or(1.0 / horizon.max(1) as f64);
    let start = opts.wallclock.then(Instant::now);
    let mut learner = BarrierLearner::new(domain, eta, tol)?;
    let rows = barrier_loop(seq, &mut learner, seed)?;

    let loss: f64 = rows.iter().map(|r| r.v).sum();
    let mut loss_center = 0.0;
    for r in &rows {
        loss_center += seq.value(r.t, &r.w)?;
    }
    let best = seq.best_fixed(domain, 0.0)?.total;
    Ok(OnePointRecord {
        summary: OnePointSummary {
            seed,
            loss,
            loss_center,
            regret: loss - best,
            regret_center: loss_center - best,
            v_t,
            eta,
            halvings: learner.halvings(),
            wallclock_ms: start.map_or(0, |s| s.elapsed().as_millis() as u64),
        },
        rows,
    })
}

fn barrier_loop(
    oracle: &dyn ValueOracle,
    learner: &mut BarrierLearner,
    seed: u64,
) -> Result<Vec<OnePointRow>> {
    let mut rng = Rng::new(seed);
    let mut rows = Vec::with_capacity(oracle.horizon());
    for t in 1..=oracle.horizon() {
        let w = learner.iterate().to_vec();
        let g_tilde = learner.optimism();
        let play = learner.draw(&mut rng);
        let v = oracle.value(t, &play.x)?;
        let g = learner.observe(&play, v)?;
        rows.push(OnePointRow {
            t,
            coord: play.coord,
            sign: play.sign,
            w,
            x: play.x,
            v,
            z: play.z,
            g,
            g_tilde,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::Family;

    #[test]
    fn eigen_examples() {
        assert_eq!(barrier_eigen(0.0, -1.0, 1.0).unwrap(), 2.0);
        assert!((barrier_eigen(0.5, 0.0, 2.0).unwrap() - (1.0 / 2.25 + 4.0)).abs() < 1e-12);
        assert!(barrier_eigen(1.0, -1.0, 1.0).is_err());
        for k in 1..100 {
            let w = -1.0 + 0.02 * k as f64;
            assert!(barrier_eigen(w, -1.0, 1.0).unwrap() >= 1.0);
        }
    }

    #[test]
    fn play_examples() {
        let dom = Domain::cube(2, 1.0).unwrap();
        let mut l = BarrierLearner::new(&dom, 0.1, 1e-9).unwrap();
        let p = l.play_action(0, 1.0);
        assert!((p.x[0] - 0.5f64.sqrt()).abs() < 1e-15 && p.x[1] == 0.0);
        let m = l.play_action(0, -1.0);
        assert_eq!(m.x[0], -p.x[0]);
        l.set_state(vec![1.0 - 1e-6, 0.0], vec![0.0; 2], vec![0.0; 2])
            .unwrap();
        // The exact offset is below the distance to the side, although the sum
        // w + offset rounds to the side itself at this distance.
        let near = l.play_action(0, 1.0);
        let offset = near.lambda.powf(-0.5);
        let w0 = l.iterate()[0];
        assert!(offset < 1.0 - w0 && offset < w0 + 1.0);
    }

    #[test]
    fn estimate_examples() {
        let dom = Domain::cube(1, 1.0).unwrap();
        let l = BarrierLearner::new(&dom, 0.1, 1e-9).unwrap();
        let p = l.play_action(0, 1.0);
        let g = l.estimate(&p, 0.5, &[0.0]);
        assert!((g[0] - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        let g = l.estimate(&p, p.z, &[0.25]);
        assert_eq!(g, vec![0.25]);
    }

    #[test]
    fn optimism_examples() {
        let dom = Domain::cube(1, 1.0).unwrap();
        let mut l = BarrierLearner::new(&dom, 0.1, 1e-9).unwrap();
        assert_eq!(l.optimism(), vec![0.0]);
        l.set_state(vec![0.0], vec![1.0], vec![0.0]).unwrap();
        assert!((l.optimism()[0] - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        // Buffers holding exact values at the current iterate recover l.
        let dom = Domain::hyper_rectangle(vec![-1.0, -0.5], vec![2.0, 0.5]).unwrap();
        let mut l = BarrierLearner::new(&dom, 0.1, 1e-9).unwrap();
        l.set_state(vec![0.3, -0.1], vec![0.0; 2], vec![0.0; 2])
            .unwrap();
        let ell = [0.7, -1.3];
        let dot = |x: &[f64]| ell[0] * x[0] + ell[1] * x[1];
        let rp: Vec<f64> = (0..2).map(|i| dot(&l.play_action(i, 1.0).x)).collect();
        let rm: Vec<f64> = (0..2).map(|i| dot(&l.play_action(i, -1.0).x)).collect();
        l.set_state(vec![0.3, -0.1], rp, rm).unwrap();
        let gt = l.optimism();
        assert!((gt[0] - ell[0]).abs() < 1e-12 && (gt[1] - ell[1]).abs() < 1e-12);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve_coordinate(0.0, 0.0, 0.1, -1.0, 1.0, 1e-12).unwrap(),
            0.0
        );
        assert_eq!(
            solve_coordinate(0.0, 0.0, 0.1, 0.0, 4.0, 1e-12).unwrap(),
            2.0
        );
        let x = solve_coordinate(5.0, 0.3, 0.1, -1.0, 1.0, 1e-10).unwrap();
        // Dense grid sign-change bracket.
        let n = 200_000;
        let mut bracket = None;
        let mut prev = fixed_point_residual(-1.0 + 2.0 / n as f64, 5.0, 0.3, 0.1, -1.0, 1.0);
        for k in 2..n {
            let xk = -1.0 + 2.0 * k as f64 / n as f64;
            let f = fixed_point_residual(xk, 5.0, 0.3, 0.1, -1.0, 1.0);
            if prev <= 0.0 && f > 0.0 {
                bracket = Some((xk - 2.0 / n as f64, xk));
                break;
            }
            prev = f;
        }
        let (lo, hi) = bracket.unwrap();
        assert!(x >= lo - 1e-12 && x <= hi + 1e-12);
        assert!(matches!(
            solve_coordinate(1.0, 20.0, 0.1, -1.0, 1.0, 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn empty_and_rejections() {
        let dom = Domain::cube(2, 1.0).unwrap();
        let seq = LossSequence::new(Family::LinearDrift { ls: vec![] }, 0, &dom).unwrap();
        let rec = run_one_point(&seq, &dom, 1, &OnePointOptions::default()).unwrap();
        assert!(rec.rows.is_empty());
        let ball = Domain::ball(2, 1.0).unwrap();
        let seq =
            LossSequence::new(Family::StationaryLinear { l: vec![1.0, 0.0] }, 3, &ball).unwrap();
        assert!(matches!(
            run_one_point(&seq, &ball, 1, &OnePointOptions::default()),
            Err(Error::Config(_))
        ));
        let quad = LossSequence::new(
            Family::StrongQuadratic {
                lambda: 1.0,
                centers: vec![vec![0.0, 0.0]; 3],
            },
            3,
            &dom,
        )
        .unwrap();
        assert!(matches!(
            run_one_point(&quad, &dom, 1, &OnePointOptions::default()),
            Err(Error::Config(_))
        ));
        let off = Domain::hyper_rectangle(vec![0.5, -1.0], vec![1.0, 1.0]).unwrap();
        assert!(BarrierLearner::new(&off, 0.1, 1e-3).is_err());
    }

    #[test]
    fn iterates_stay_interior() {
        let dom = Domain::hyper_rectangle(vec![-1.0, 0.0], vec![1.0, 2.0]).unwrap();
        let mut rng = Rng::with_stream(5, Rng::ADVERSARY_STREAM);
        let fam = crate::adversary::drift::rademacher_linear(&[0.5, -0.5], 0.5, 500, &mut rng);
        let seq = LossSequence::new(fam, 500, &dom).unwrap();
        let rec = run_one_point(
            &seq,
            &dom,
            5,
            &OnePointOptions {
                eta: Some(0.05),
                ..Default::default()
            },
        )
        .unwrap();
        for r in &rec.rows {
            for i in 0..2 {
                let (a, b) = ([-1.0, 0.0][i], [1.0, 2.0][i]);
                assert!(a < r.w[i] && r.w[i] < b);
                assert!(a < r.x[i] && r.x[i] < b);
            }
        }
    }
}
