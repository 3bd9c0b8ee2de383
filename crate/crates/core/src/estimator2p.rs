//! Two-point coordinate gradient estimator with an optimism buffer.
//!
//! Each round one coordinate `i` is queried at `w +- delta e_i`. The estimate keeps
//! the stored directional values for every other coordinate:
//! `g = d (v - g~_i) e_i + g~`, after which `g~_i <- v`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metrics::{batch_mean_se, mean_se};

pub fn query_points(w: &[f64], i: usize, delta: f64) -> (Vec<f64>, Vec<f64>) {
    let mut plus = w.to_vec();
    let mut minus = w.to_vec();
    plus[i] += delta;
    minus[i] -= delta;
    (plus, minus)
}

/// Central difference `(f+ - f-) / (2 delta)`.
pub fn directional_value(f_plus: f64, f_minus: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!(
            "exploration radius must be positive, got {delta}"
        )));
    }
    Ok((f_plus - f_minus) / (2.0 * delta))
}

/// Hard check that a directional value respects the declared Lipschitz constant.
pub fn check_lipschitz(t: usize, v: f64, g: f64) -> Result<()> {
    if !v.is_finite() || v.abs() > g * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::LipschitzViolation {
            t,
            value: v.abs(),
            bound: g,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub g: Vec<f64>,
    /// `||g_t - g~_t||^2 = d^2 (v - g~_i)^2`.
    pub innov_sq: f64,
}

#[derive(Debug, Clone)]
pub struct TwoPointEstimator {
    optimism: Vec<f64>,
    delta: f64,
    last_sample: Vec<usize>,
    coords: Vec<usize>,
}

impl TwoPointEstimator {
    pub fn new(dim: usize, delta: f64) -> Self {
        Self {
            optimism: vec![0.0; dim],
            delta,
            last_sample: vec![0; dim],
            coords: Vec::new(),
        }
    }

    /// Current optimism `g~_t` (the gradient prediction for the coming round).
    pub fn optimism(&self) -> &[f64] {
        &self.optimism
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Round (1-based) at which each coordinate was last sampled, 0 if never.
    pub fn last_sample(&self) -> &[usize] {
        &self.last_sample
    }

    /// Sampled coordinate of every round so far; input to [`rho_statistics`].
    pub fn coordinate_log(&self) -> &[usize] {
        &self.coords
    }

    pub fn update(&mut self, t: usize, i: usize, v: f64) -> Estimate {
        let d = self.optimism.len() as f64;
        let innovation = d * (v - self.optimism[i]);
        let mut g = self.optimism.clone();
        g[i] += innovation;
        self.optimism[i] = v;
        self.last_sample[i] = t;
        self.coords.push(i);
        Estimate {
            g,
            innov_sq: innovation * innovation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RhoSummary {
    pub rounds: usize,
    pub dim: usize,
    /// Mean of `rho_{t,i}` over all rounds and coordinates.
    pub mean_rho: f64,
    pub se_rho: f64,
    /// Mean over rounds of `max_i rho_{t,i}`.
    pub mean_max_rho: f64,
    pub se_max_rho: f64,
    /// Mean waiting time between consecutive samples of one coordinate.
    pub mean_wait: f64,
    pub se_wait: f64,
    /// Mean length of the epochs in which every coordinate gets sampled once.
    pub mean_collection: f64,
    pub se_collection: f64,
    pub collections: usize,
    /// `rho` value -> count over all `(t, i)`.
    pub histogram: BTreeMap<usize, usize>,
}

/// Non-consecutive sampling gaps of a coordinate sequence (0-based coordinates).
///
/// `rho_{t,i} = tau_2 - tau_1` with `tau_1` the last sample of `i` before `t` (0 if
/// none) and `tau_2` the first sample at or after `t` (`T + 1` if none).
/// Standard errors use batch means over rounds, since neighbouring gaps overlap.
pub fn rho_statistics(coords: &[usize], dim: usize) -> RhoSummary {
    let n = coords.len();
    if n == 0 || dim == 0 {
        return RhoSummary {
            dim,
            ..Default::default()
        };
    }
    // next[t] for each coordinate, filled backwards.
    let mut next_at = vec![n + 1; dim];
    let mut last_at = vec![0usize; dim];
    let mut rho_sum_t = vec![0.0; n];
    let mut rho_max_t = vec![0.0; n];
    let mut histogram = BTreeMap::new();
    // tau_2 for round t: first sample at or after t. Walk backwards to record it.
    let mut tau2 = vec![0usize; n * dim];
    for t in (1..=n).rev() {
        next_at[coords[t - 1]] = t;
        tau2[(t - 1) * dim..t * dim].copy_from_slice(&next_at);
    }
    for t in 1..=n {
        let mut s = 0.0;
        let mut m = 0usize;
        for i in 0..dim {
            let rho = tau2[(t - 1) * dim + i] - last_at[i];
            s += rho as f64;
            m = m.max(rho);
            *histogram.entry(rho).or_insert(0) += 1;
        }
        rho_sum_t[t - 1] = s / dim as f64;
        rho_max_t[t - 1] = m as f64;
        last_at[coords[t - 1]] = t;
    }
    let (mean_rho, se_rho) = batch_mean_se(&rho_sum_t, 50);
    let (mean_max_rho, se_max_rho) = batch_mean_se(&rho_max_t, 50);

    let mut waits = Vec::new();
    let mut prev = vec![0usize; dim];
    for (k, &i) in coords.iter().enumerate() {
        let t = k + 1;
        waits.push((t - prev[i]) as f64);
        prev[i] = t;
    }
    let (mean_wait, se_wait) = batch_mean_se(&waits, 50);

    let mut epochs = Vec::new();
    let mut seen = vec![false; dim];
    let mut count = 0;
    let mut len = 0;
    for &i in coords {
        len += 1;
        if !seen[i] {
            seen[i] = true;
            count += 1;
        }
        if count == dim {
            epochs.push(len as f64);
            seen.iter_mut().for_each(|s| *s = false);
            count = 0;
            len = 0;
        }
    }
    let (mean_collection, se_collection) = mean_se(&epochs);

    RhoSummary {
        rounds: n,
        dim,
        mean_rho,
        se_rho,
        mean_max_rho,
        se_max_rho,
        mean_wait,
        se_wait,
        mean_collection,
        se_collection,
        collections: epochs.len(),
        histogram,
    }
}

/// `d * H_d`, the expected number of uniform draws to see all `d` coordinates.
pub fn coupon_collector_mean(d: usize) -> f64 {
    d as f64 * (1..=d).map(|k| 1.0 / k as f64).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_point_examples() {
        assert_eq!(
            query_points(&[0.0, 0.0], 0, 0.1),
            (vec![0.1, 0.0], vec![-0.1, 0.0])
        );
        assert_eq!(
            query_points(&[0.3, 0.2], 1, 0.0),
            (vec![0.3, 0.2], vec![0.3, 0.2])
        );
    }

    #[test]
    fn directional_value_examples() {
        // f = <(3,1), x> along e_1 from any w.
        let w = [0.2, -0.4];
        let (p, m) = query_points(&w, 0, 0.05);
        let f = |x: &[f64]| 3.0 * x[0] + x[1];
        assert!((directional_value(f(&p), f(&m), 0.05).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(directional_value(1.5, 1.5, 0.1).unwrap(), 0.0);
        let v = directional_value(0.6f64.powi(2), 0.4f64.powi(2), 0.1).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(directional_value(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn update_examples() {
        let mut e = TwoPointEstimator::new(2, 0.1);
        e.optimism = vec![1.0, 2.0];
        let est = e.update(1, 0, 3.0);
        assert_eq!(est.g, vec![5.0, 2.0]);
        assert_eq!(e.optimism(), &[3.0, 2.0]);
        assert_eq!(est.innov_sq, 16.0);

        let est = e.update(2, 1, 2.0);
        assert_eq!(est.g, vec![3.0, 2.0]);
        assert_eq!(est.innov_sq, 0.0);

        let mut e = TwoPointEstimator::new(3, 0.1);
        let est = e.update(1, 1, 1.0);
        assert_eq!(est.g, vec![0.0, 3.0, 0.0]);
        assert_eq!(e.last_sample(), &[0, 1, 0]);
    }

    #[test]
    fn single_coordinate_gaps_are_one() {
        let s = rho_statistics(&[0; 100], 1);
        assert_eq!(s.mean_rho, 1.0);
        assert_eq!(s.mean_max_rho, 1.0);
        assert_eq!(s.histogram.len(), 1);
    }

    #[test]
    fn gaps_of_a_scripted_sequence() {
        // d = 2, T = 4, coords 0,0,1,0.
        // Coordinate 0 samples {1,2,4}: rho_t = 1-0, 2-1, 4-2, 4-2 = 1,1,2,2.
        // Coordinate 1 samples {3}: rho_t = 3,3,3,5-3 = 3,3,3,2.
        let s = rho_statistics(&[0, 0, 1, 0], 2);
        assert!((s.mean_rho - 17.0 / 8.0).abs() < 1e-15);
        assert!((s.mean_max_rho - 11.0 / 4.0).abs() < 1e-15);
        assert_eq!(s.collections, 1);
        assert_eq!(s.mean_collection, 3.0);
    }

    #[test]
    fn coupon_mean() {
        assert!((coupon_collector_mean(3) - 5.5).abs() < 1e-15);
        assert_eq!(coupon_collector_mean(1), 1.0);
    }
}
