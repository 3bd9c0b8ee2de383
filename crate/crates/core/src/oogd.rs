//! Optimistic online gradient descent over a shrunk domain.
//!
//! `w^_{t+1} = P(w^_t - eta_t g_t)` and `w_{t+1} = P(w^_{t+1} - eta_{t+1} g~_{t+1})`,
//! where `eta_{t+1}` already sees the innovation of round `t`.

use crate::error::{check_dim, Error, Result};
use crate::geometry::Domain;
use crate::linalg::{axpy, dist_sq};

/// Natural log of the horizon, floored at `ln 2` so that `T = 1` keeps constants
/// positive.
pub fn ln_horizon(horizon: usize) -> f64 {
    (horizon.max(2) as f64).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `r / sqrt(c + V_{t-1})`.
    AdaptiveSqrt {
        r: f64,
        c: f64,
    },
    /// `scale / (lambda t)`.
    InverseLinear {
        lambda: f64,
        scale: f64,
    },
    Fixed {
        eta: f64,
    },
}

impl StepSchedule {
    /// Convex gradient-variation schedule: `c = 1152 d^3 R^4 L^2 ln T`.
    pub fn gv_convex(dim: usize, r: f64, l: f64, horizon: usize) -> Self {
        let d = dim as f64;
        StepSchedule::AdaptiveSqrt {
            r,
            c: 1152.0 * d.powi(3) * r.powi(4) * l * l * ln_horizon(horizon),
        }
    }

    /// Gradient-variance and small-loss schedule: `c = d^2`.
    pub fn variance(dim: usize, r: f64) -> Self {
        StepSchedule::AdaptiveSqrt {
            r,
            c: (dim * dim) as f64,
        }
    }

    pub fn strongly_convex(lambda: f64) -> Result<Self> {
        let s = StepSchedule::InverseLinear { lambda, scale: 1.0 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StepSchedule::AdaptiveSqrt { r, c }
                if !(r > 0.0 && c >= 0.0 && r.is_finite() && c.is_finite()) =>
            {
                Err(Error::Config(format!(
                    "adaptive schedule needs r > 0 and c >= 0, got r={r}, c={c}"
                )))
            }
            StepSchedule::InverseLinear { lambda, scale } if !(lambda > 0.0 && scale > 0.0) => {
                Err(Error::Config(format!(
                    "inverse-linear schedule needs lambda > 0 and scale > 0, got lambda={lambda}"
                )))
            }
            StepSchedule::Fixed { eta } if !(eta > 0.0 && eta.is_finite()) => Err(Error::Config(
                format!("fixed step size must be positive, got {eta}"),
            )),
            _ => Ok(()),
        }
    }

    /// `eta_t` given `V_{t-1}`.
    pub fn eta(&self, t: usize, vbar_prev: f64) -> f64 {
        match *self {
            StepSchedule::AdaptiveSqrt { r, c } => {
                let denom = (c + vbar_prev).sqrt();
                if denom > 0.0 {
                    r / denom
                } else {
                    // c = 0 before any innovation: no information yet, take the
                    // largest step the domain can absorb.
                    r
                }
            }
            StepSchedule::InverseLinear { lambda, scale } => scale / (lambda * t.max(1) as f64),
            StepSchedule::Fixed { eta } => eta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OogdState {
    w_hat: Vec<f64>,
    w: Vec<f64>,
    t: usize,
    vbar: f64,
}

/// Step sizes used by one [`OogdState::step_with`] call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSizes {
    pub eta_t: f64,
    pub eta_next: f64,
}

impl OogdState {
    /// Start at the projection of the origin onto `(1 - shrink) X`.
    pub fn new(domain: &Domain, shrink: f64) -> Result<Self> {
        let w = domain.project(shrink, &vec![0.0; domain.dim()])?;
        Ok(Self {
            w_hat: w.clone(),
            w,
            t: 1,
            vbar: 0.0,
        })
    }

    pub fn from_parts(w_hat: Vec<f64>, w: Vec<f64>, t: usize, vbar: f64) -> Self {
        Self { w_hat, w, t, vbar }
    }

    /// Played center `w_t`.
    pub fn center(&self) -> &[f64] {
        &self.w
    }

    pub fn internal(&self) -> &[f64] {
        &self.w_hat
    }

    pub fn round(&self) -> usize {
        self.t
    }

    /// `sum_{s < t} ||g_s - g~_s||^2`.
    pub fn vbar(&self) -> f64 {
        self.vbar
    }

    /// One update with externally chosen step sizes; `innov_sq = ||g_t - g~_t||^2`.
    #[allow(clippy::too_many_arguments)]
    pub fn step(
        &mut self,
        g: &[f64],
        innov_sq: f64,
        g_tilde_next: &[f64],
        eta_t: f64,
        eta_next: f64,
        domain: &Domain,
        shrink: f64,
    ) -> Result<()> {
        check_dim(self.w.len(), g.len())?;
        check_dim(self.w.len(), g_tilde_next.len())?;
        axpy(-eta_t, g, &mut self.w_hat);
        domain.project_in_place(shrink, &mut self.w_hat);
        self.w.copy_from_slice(&self.w_hat);
        axpy(-eta_next, g_tilde_next, &mut self.w);
        domain.project_in_place(shrink, &mut self.w);
        self.vbar += innov_sq;
        self.t += 1;
        Ok(())
    }

    /// One update with step sizes from `schedule`: `eta_t` uses `V_{t-1}`,
    /// `eta_{t+1}` uses `V_t`.
    pub fn step_with(
        &mut self,
        schedule: &StepSchedule,
        g: &[f64],
        g_tilde: &[f64],
        g_tilde_next: &[f64],
        domain: &Domain,
        shrink: f64,
    ) -> Result<StepSizes> {
        let t = self.t;
        let innov_sq = dist_sq(g, g_tilde);
        let eta_t = schedule.eta(t, self.vbar);
        let eta_next = schedule.eta(t + 1, self.vbar + innov_sq);
        self.step(g, innov_sq, g_tilde_next, eta_t, eta_next, domain, shrink)?;
        Ok(StepSizes { eta_t, eta_next })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_examples() {
        let s = StepSchedule::variance(2, 1.0);
        assert_eq!(s.eta(1, 0.0), 0.5);
        assert!(s.eta(2, 1.0) < s.eta(1, 0.0));
        let il = StepSchedule::strongly_convex(1.0).unwrap();
        assert!((il.eta(10, 0.0) - 0.1).abs() < 1e-15);
        assert!(matches!(
            StepSchedule::strongly_convex(0.0),
            Err(Error::Config(_))
        ));
        let gv = StepSchedule::gv_convex(2, 1.0, 1.0, 100);
        let expect = 1.0 / (1152.0 * 8.0 * 100f64.ln()).sqrt();
        assert!((gv.eta(1, 0.0) - expect).abs() < 1e-15);
    }

    #[test]
    fn null_gradient_keeps_state() {
        let dom = Domain::ball(2, 1.0).unwrap();
        let mut s = OogdState::from_parts(vec![0.2, 0.1], vec![0.2, 0.1], 3, 1.5);
        s.step(&[0.0, 0.0], 0.0, &[0.0, 0.0], 0.3, 0.3, &dom, 0.0)
            .unwrap();
        assert_eq!(s.internal(), &[0.2, 0.1]);
        assert_eq!(s.center(), &[0.2, 0.1]);
        assert_eq!(s.vbar(), 1.5);
    }

    #[test]
    fn two_projection_example() {
        let dom = Domain::ball(2, 1.0).unwrap();
        let mut s = OogdState::new(&dom, 0.0).unwrap();
        s.step(&[1.0, 0.0], 1.0, &[1.0, 0.0], 0.5, 0.5, &dom, 0.0)
            .unwrap();
        assert_eq!(s.internal(), &[-0.5, 0.0]);
        assert_eq!(s.center(), &[-1.0, 0.0]);
    }

    #[test]
    fn stays_feasible() {
        let dom = Domain::cube(3, 0.5).unwrap();
        let mut s = OogdState::new(&dom, 0.2).unwrap();
        let sched = StepSchedule::Fixed { eta: 2.0 };
        for k in 0..50 {
            let g = [(k as f64).sin(), 2.0, -3.0];
            let gt = [0.5, -1.0, (k as f64).cos()];
            s.step_with(&sched, &g, &gt, &gt, &dom, 0.2).unwrap();
            assert!(dom.contains(0.2, s.center(), 1e-12));
            assert!(dom.contains(0.2, s.internal(), 1e-12));
        }
    }
}
