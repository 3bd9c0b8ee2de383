//! Regret, path length, variation measures, seed aggregation and slope fits.

use log::warn;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::adversary::{LossSequence, ValueOracle};
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::linalg::dist;
use crate::record::RunRecord;

/// Sample mean and standard error of the mean (0 for fewer than two values).
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Mean and batch-means standard error for a correlated series: the series is cut
/// into `batches` contiguous blocks whose means are treated as independent.
pub fn batch_mean_se(values: &[f64], batches: usize) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let b = batches.min(n);
    if b < 2 {
        return (mean, 0.0);
    }
    let size = n / b;
    let means: Vec<f64> = (0..b)
        .map(|k| {
            let end = if k + 1 == b { n } else { (k + 1) * size };
            let chunk = &values[k * size..end];
            chunk.iter().sum::<f64>() / chunk.len() as f64
        })
        .collect();
    (mean, mean_se(&means).1)
}

/// Per-seed values with their mean and standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedAggregate {
    pub values: Vec<f64>,
    pub mean: f64,
    pub se: f64,
}

impl SeedAggregate {
    pub fn new(values: Vec<f64>) -> Self {
        let (mean, se) = mean_se(&values);
        Self { values, mean, se }
    }
}

/// Static regret of a two-point record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticRegret {
    /// Two-point average loss against the best point of `X`.
    pub avg: f64,
    /// Center loss against the best point of `(1 - shrink) X`.
    pub center: f64,
    /// Best total over `X` minus best total over the shrunk domain (<= 0).
    pub comparator_gap: f64,
}

/// `sum losses - min_{x in (1-shrink) X} sum f_t(x)`.
pub fn regret_of_losses(
    losses: &[f64],
    seq: &LossSequence,
    domain: &Domain,
    shrink: f64,
) -> Result<f64> {
    if losses.len() != seq.horizon() {
        return Err(Error::InvalidInput(format!(
            "{} losses for horizon {}",
            losses.len(),
            seq.horizon()
        )));
    }
    Ok(losses.iter().sum::<f64>() - seq.best_fixed(domain, shrink)?.total)
}

pub fn static_regret(
    record: &RunRecord,
    seq: &LossSequence,
    domain: &Domain,
    shrink: f64,
) -> Result<StaticRegret> {
    if record.rows.len() != seq.horizon() {
        return Err(Error::InvalidInput(
            "record does not cover the horizon".into(),
        ));
    }
    let best = seq.best_fixed(domain, 0.0)?.total;
    let best_shrunk = seq.best_fixed(domain, shrink)?.total;
    let mut avg = 0.0;
    let mut center = 0.0;
    for r in &record.rows {
        avg += 0.5 * (r.f_plus + r.f_minus);
        center += seq.value(r.t, &r.w)?;
    }
    Ok(StaticRegret {
        avg: avg - best,
        center: center - best_shrunk,
        comparator_gap: best - best_shrunk,
    })
}

/// `sum f_t(x_t) - sum f_t(u_t)`.
pub fn dynamic_regret(
    seq: &LossSequence,
    plays: &[Vec<f64>],
    comparators: &[Vec<f64>],
) -> Result<f64> {
    if plays.len() != seq.horizon() || comparators.len() != seq.horizon() {
        return Err(Error::InvalidInput(format!(
            "need {} plays and comparators, got {} and {}",
            seq.horizon(),
            plays.len(),
            comparators.len()
        )));
    }
    let mut total = 0.0;
    for (k, (x, u)) in plays.iter().zip(comparators).enumerate() {
        total += seq.value(k + 1, x)? - seq.value(k + 1, u)?;
    }
    Ok(total)
}

/// `P_T = sum_{t>=2} ||u_t - u_{t-1}||`.
pub fn path_length(u: &[Vec<f64>]) -> f64 {
    u.windows(2).map(|w| dist(&w[1], &w[0])).sum()
}

/// `F_T`: best fixed total over `X` minus the per-round minima over the inflated
/// set `X + (G/L) B`.
pub fn small_loss(seq: &LossSequence, domain: &Domain) -> Result<f64> {
    let c = seq.constants();
    let minima = seq.per_round_minima(domain, c.g / c.l)?;
    Ok(seq.best_fixed(domain, 0.0)?.total - minima.iter().sum::<f64>())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// 95% confidence half-width from the residual variance.
    pub half_width: f64,
    pub used: usize,
    pub excluded: usize,
}

/// Least-squares slope of `ln y` against `ln x`. Nonpositive `y` are dropped.
pub fn slope_fit(points: &[(f64, f64)]) -> Result<SlopeFit> {
    let kept: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let excluded = points.len() - kept.len();
    if excluded > 0 {
        warn!("slope fit: excluded {excluded} nonpositive points");
    }
    let n = kept.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "slope fit needs at least 3 positive points, got {n}"
        )));
    }
    let mx = kept.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = kept.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = kept.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput(
            "slope fit needs distinct x values".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = kept
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let dof = (n - 2) as f64;
    let se = (rss / dof / sxx).sqrt();
    let q = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| Error::Numeric(e.to_string()))?
        .inverse_cdf(0.975);
    Ok(SlopeFit {
        slope,
        intercept,
        half_width: q * se,
        used: n,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::Family;

    #[test]
    fn slope_examples() {
        let pow: Vec<(f64, f64)> = (9..14)
            .map(|k| (2f64.powi(k), 3.0 * 2f64.powi(k).sqrt()))
            .collect();
        let f = slope_fit(&pow).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-9 && f.half_width < 1e-6);
        let flat: Vec<(f64, f64)> = (1..5).map(|k| (k as f64, 7.0)).collect();
        assert!(slope_fit(&flat).unwrap().slope.abs() < 1e-12);
        let lin: Vec<(f64, f64)> = (1..5).map(|k| (k as f64, 2.0 * k as f64)).collect();
        assert!((slope_fit(&lin).unwrap().slope - 1.0).abs() < 1e-12);
        let with_bad = [(1.0, 1.0), (2.0, -1.0), (3.0, 3.0), (4.0, 4.0)];
        assert_eq!(slope_fit(&with_bad).unwrap().excluded, 1);
        assert!(slope_fit(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
    }

    #[test]
    fn path_length_alternating() {
        let u: Vec<Vec<f64>> = (0..10)
            .map(|k| {
                if k % 2 == 0 {
                    vec![0.0, 0.0]
                } else {
                    vec![1.0, 0.0]
                }
            })
            .collect();
        assert_eq!(path_length(&u), 9.0);
        assert_eq!(path_length(&vec![vec![0.3, 0.1]; 5]), 0.0);
    }

    #[test]
    fn regret_examples() {
        let dom = Domain::cube(2, 1.0).unwrap();
        let seq =
            LossSequence::new(Family::StationaryLinear { l: vec![1.0, 0.0] }, 2, &dom).unwrap();
        let plays = vec![vec![0.0, 0.0]; 2];
        let losses: Vec<f64> = plays
            .iter()
            .enumerate()
            .map(|(k, x)| seq.value(k + 1, x).unwrap())
            .collect();
        assert_eq!(regret_of_losses(&losses, &seq, &dom, 0.0).unwrap(), 2.0);
        let star = vec![vec![-1.0, 0.0]; 2];
        assert_eq!(dynamic_regret(&seq, &star, &star).unwrap(), 0.0);
        assert_eq!(dynamic_regret(&seq, &plays, &star).unwrap(), 2.0);
        assert!(dynamic_regret(&seq, &plays[..1], &star).is_err());
    }

    #[test]
    fn small_loss_zero_for_common_center() {
        let dom = Domain::ball(2, 1.0).unwrap();
        let seq = LossSequence::new(
            Family::StrongQuadratic {
                lambda: 1.0,
                centers: vec![vec![0.3, -0.2]; 10],
            },
            10,
            &dom,
        )
        .unwrap();
        assert!(small_loss(&seq, &dom).unwrap().abs() < 1e-14);
    }

    #[test]
    fn batch_se_handles_short_series() {
        assert_eq!(batch_mean_se(&[2.0], 50), (2.0, 0.0));
        let (m, se) = batch_mean_se(&[1.0, 3.0, 1.0, 3.0], 50);
        assert_eq!(m, 2.0);
        assert!(se > 0.0);
    }
}
