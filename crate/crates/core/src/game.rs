//! Bandit bilinear zero-sum games over boxes.
//!
//! The x-player minimizes `<x, A y>` and the y-player maximizes it; both run the
//! one-point barrier learner and see only the scalar payoff of the played pair.
//! The y-player is fed `-<x, A y>` so both sides minimize.

use crate::blo1p::BarrierLearner;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Rng};
use crate::linalg::{dot, mat_t_vec, mat_vec, norm_sq, operator_norm, sub};
use crate::oogd::ln_horizon;

/// RNG stream of the y-player's exploration.
pub const Y_PLAYER_STREAM: u64 = 2;

/// Opponent of the x-player.
#[derive(Debug, Clone, PartialEq)]
pub enum Opponent {
    /// The y-player runs the barrier learner as well.
    Honest,
    /// The y-player plays the same point every round.
    FixedVertex(Vec<f64>),
    /// The y-player plays a uniformly random vertex of its box every round.
    RandomVertex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    /// Row-major `m x n` payoff matrix.
    pub a: Vec<f64>,
    pub m: usize,
    pub n: usize,
    pub x_domain: Domain,
    pub y_domain: Domain,
    pub horizon: usize,
    pub eta_x: Option<f64>,
    pub eta_y: Option<f64>,
    pub tol: Option<f64>,
    pub opponent: Opponent,
}

impl GameConfig {
    /// Validates shapes, boxes and `||A||_op <= 1`.
    pub fn new(
        a: Vec<f64>,
        m: usize,
        n: usize,
        x_domain: Domain,
        y_domain: Domain,
        horizon: usize,
    ) -> Result<Self> {
        if m == 0 || n == 0 || a.len() != m * n {
            return Err(Error::InvalidInput(format!(
                "payoff has {} entries, expected {m} x {n}",
                a.len()
            )));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("payoff entries must be finite".into()));
        }
        if !x_domain.is_box() || !y_domain.is_box() {
            return Err(Error::Domain("game strategy sets must be boxes".into()));
        }
        if x_domain.dim() != m || y_domain.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: x_domain.dim(),
            });
        }
        let op = operator_norm(&a, m, n, 1e-8);
        if op > 1.0 + 1e-8 {
            return Err(Error::Config(format!(
                "payoff operator norm {op} exceeds 1"
            )));
        }
        Ok(Self {
            a,
            m,
            n,
            x_domain,
            y_domain,
            horizon,
            eta_x: None,
            eta_y: None,
            tol: None,
            opponent: Opponent::Honest,
        })
    }
}

/// `1 / (8 sqrt(ln T) (m^3 + n^3))`.
pub fn honest_eta(m: usize, n: usize, horizon: usize) -> f64 {
    1.0 / (8.0 * ln_horizon(horizon).sqrt() * ((m * m * m + n * n * n) as f64))
}

/// `min(1 / (8 Rx Ry m^2 sqrt(V ln T)), honest_eta)` with box diameters `Rx`, `Ry`.
pub fn x_eta(m: usize, n: usize, rx: f64, ry: f64, v_x: f64, horizon: usize) -> f64 {
    let first = 1.0 / (8.0 * rx * ry * (m * m) as f64 * (v_x * ln_horizon(horizon)).sqrt());
    first.min(honest_eta(m, n, horizon))
}

fn box_of(domain: &Domain) -> Result<(&[f64], &[f64])> {
    domain
        .bounds()
        .ok_or_else(|| Error::Domain("expected a box".into()))
}

fn diameter(domain: &Domain) -> Result<f64> {
    let (l, u) = box_of(domain)?;
    Ok(l.iter()
        .zip(u)
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt())
}

/// `min_{x in box} <c, x>`, coordinate-wise at the endpoint matching the sign.
pub fn box_min(c: &[f64], domain: &Domain) -> Result<f64> {
    let (l, u) = box_of(domain)?;
    Ok(c.iter()
        .zip(l.iter().zip(u))
        .map(|(ci, (a, b))| (ci * a).min(ci * b))
        .sum())
}

/// `max_{x in box} <c, x>`.
pub fn box_max(c: &[f64], domain: &Domain) -> Result<f64> {
    Ok(-box_min(&c.iter().map(|v| -v).collect::<Vec<_>>(), domain)?)
}

/// `max_y <A^T x, y> - min_x <A y, x>`.
pub fn duality_gap(
    a: &[f64],
    m: usize,
    n: usize,
    x_bar: &[f64],
    y_bar: &[f64],
    x_dom: &Domain,
    y_dom: &Domain,
) -> Result<f64> {
    if !x_dom.contains(0.0, x_bar, 1e-12) || !y_dom.contains(0.0, y_bar, 1e-12) {
        return Err(Error::InvalidInput(
            "averaged strategies lie outside their boxes".into(),
        ));
    }
    let hi = box_max(&mat_t_vec(a, m, n, x_bar), y_dom)?;
    let lo = box_min(&mat_vec(a, m, n, y_bar), x_dom)?;
    Ok(hi - lo)
}

/// Duality gap by enumerating every vertex of both boxes.
pub fn duality_gap_brute_force(
    a: &[f64],
    m: usize,
    n: usize,
    x_bar: &[f64],
    y_bar: &[f64],
    x_dom: &Domain,
    y_dom: &Domain,
) -> Result<f64> {
    let xs = x_dom
        .vertices()
        .ok_or_else(|| Error::Domain("expected a box".into()))?;
    let ys = y_dom
        .vertices()
        .ok_or_else(|| Error::Domain("expected a box".into()))?;
    let ax = mat_t_vec(a, m, n, x_bar);
    let ay = mat_vec(a, m, n, y_bar);
    let hi = ys
        .iter()
        .map(|y| dot(&ax, y))
        .fold(f64::NEG_INFINITY, f64::max);
    let lo = xs.iter().map(|x| dot(&ay, x)).fold(f64::INFINITY, f64::min);
    Ok(hi - lo)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameCheckpoint {
    pub t: usize,
    pub gap: f64,
    pub reg_x: f64,
    pub reg_y: f64,
    /// `|gap - (reg_x + reg_y) / t|`.
    pub identity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GameRecord {
    pub seed: u64,
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<Vec<f64>>,
    /// `<x_t, A y_t>`: the x-player's loss and the y-player's reward.
    pub payoffs: Vec<f64>,
    pub x_bar: Vec<f64>,
    pub y_bar: Vec<f64>,
    pub checkpoints: Vec<GameCheckpoint>,
    pub reg_x: f64,
    pub reg_y: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    /// Oracle `sum ||A y_t - A y_{t-1}||^2` of a scripted opponent.
    pub v_x: Option<f64>,
    pub halvings: (usize, usize),
}

fn checkpoint(
    cfg: &GameConfig,
    t: usize,
    sx: &[f64],
    sy: &[f64],
    total: f64,
) -> Result<GameCheckpoint> {
    let (m, n) = (cfg.m, cfg.n);
    let tf = t as f64;
    let x_bar: Vec<f64> = sx.iter().map(|v| v / tf).collect();
    let y_bar: Vec<f64> = sy.iter().map(|v| v / tf).collect();
    let gap = duality_gap(&cfg.a, m, n, &x_bar, &y_bar, &cfg.x_domain, &cfg.y_domain)?;
    let reg_x = total - box_min(&mat_vec(&cfg.a, m, n, sy), &cfg.x_domain)?;
    let reg_y = box_max(&mat_t_vec(&cfg.a, m, n, sx), &cfg.y_domain)? - total;
    Ok(GameCheckpoint {
        t,
        gap,
        reg_x,
        reg_y,
        identity_residual: (gap - (reg_x + reg_y) / tf).abs(),
    })
}

fn script(cfg: &GameConfig, seed: u64) -> Result<Option<Vec<Vec<f64>>>> {
    let t = cfg.horizon;
    match &cfg.opponent {
        Opponent::Honest => Ok(None),
        Opponent::FixedVertex(y) => {
            if y.len() != cfg.n || !cfg.y_domain.contains(0.0, y, 1e-12) {
                return Err(Error::InvalidInput(
                    "scripted y lies outside its box".into(),
                ));
            }
            Ok(Some(vec![y.clone(); t]))
        }
        Opponent::RandomVertex => {
            let (l, u) = box_of(&cfg.y_domain)?;
            let mut rng = Rng::with_stream(seed, Rng::ADVERSARY_STREAM);
            Ok(Some(
                (0..t)
                    .map(|_| {
                        l.iter()
                            .zip(u)
                            .map(|(a, b)| if rng.sample_sign() > 0.0 { *b } else { *a })
                            .collect()
                    })
                    .collect(),
            ))
        }
    }
}

/// Plays `cfg.horizon` rounds; checkpoints at powers of two and at the horizon.
pub fn run_game(cfg: &GameConfig, seed: u64) -> Result<GameRecord> {
    let (m, n, horizon) = (cfg.m, cfg.n, cfg.horizon);
    let tol = cfg.tol.unwrap_or(1.0 / horizon.max(1) as f64);
    let scripted = script(cfg, seed)?;
    let v_x = scripted.as_ref().map(|ys| {
        ys.windows(2)
            .map(|p| norm_sq(&mat_vec(&cfg.a, m, n, &sub(&p[1], &p[0]))))
            .sum::<f64>()
    });
    let eta_x = match (cfg.eta_x, v_x) {
        (Some(e), _) => e,
        (None, None) => honest_eta(m, n, horizon),
        (None, Some(v)) => x_eta(
            m,
            n,
            diameter(&cfg.x_domain)?,
            diameter(&cfg.y_domain)?,
            v,
            horizon,
        ),
    };
    let eta_y = cfg.eta_y.unwrap_or_else(|| honest_eta(m, n, horizon));
    let mut px = BarrierLearner::new(&cfg.x_domain, eta_x, tol)?;
    let mut py = match scripted {
        None => Some(BarrierLearner::new(&cfg.y_domain, eta_y, tol)?),
        Some(_) => None,
    };
    let mut rx = Rng::with_stream(seed, Rng::LEARNER_STREAM);
    let mut ry = Rng::with_stream(seed, Y_PLAYER_STREAM);

    let mut rec = GameRecord {
        seed,
        eta_x,
        eta_y,
        v_x,
        ..Default::default()
    };
    let (mut sx, mut sy, mut total) = (vec![0.0; m], vec![0.0; n], 0.0);
    let mut next_check = 1;
    for t in 1..=horizon {
        // Both actions are fixed before either side observes the payoff.
        let play_x = px.draw(&mut rx);
        let play_y = py.as_ref().map(|p| p.draw(&mut ry));
        let y = match (&play_y, &scripted) {
            (Some(p), _) => p.x.clone(),
            (None, Some(ys)) => ys[t - 1].clone(),
            (None, None) => unreachable!(),
        };
        let payoff = dot(&play_x.x, &mat_vec(&cfg.a, m, n, &y));
        px.observe(&play_x, payoff)?;
        if let (Some(p), Some(play)) = (py.as_mut(), play_y.as_ref()) {
            p.observe(play, -payoff)?;
        }
        sx.iter_mut().zip(&play_x.x).for_each(|(s, v)| *s += v);
        sy.iter_mut().zip(&y).for_each(|(s, v)| *s += v);
        total += payoff;
        rec.xs.push(play_x.x);
        rec.ys.push(y);
        rec.payoffs.push(payoff);
        if t == next_check || t == horizon {
            rec.checkpoints.push(checkpoint(cfg, t, &sx, &sy, total)?);
            if t == next_check {
                next_check *= 2;
            }
        }
    }
    if horizon > 0 {
        let tf = horizon as f64;
        rec.x_bar = sx.iter().map(|v| v / tf).collect();
        rec.y_bar = sy.iter().map(|v| v / tf).collect();
        let last = rec.checkpoints.last().expect("final checkpoint");
        rec.reg_x = last.reg_x;
        rec.reg_y = last.reg_y;
    }
    rec.halvings = (px.halvings(), py.as_ref().map_or(0, |p| p.halvings()));
    Ok(rec)
}

impl GameRecord {
    pub fn gap_at(&self, t: usize) -> Option<f64> {
        self.checkpoints.iter().find(|c| c.t == t).map(|c| c.gap)
    }
}
