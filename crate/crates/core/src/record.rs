//! Per-round traces and run summaries.

use crate::adversary::VarianceMeasure;

/// One round of a two-point run. Coordinate runs fill `coord`; sphere runs fill
/// `direction`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPointRow {
    pub t: usize,
    pub coord: Option<usize>,
    pub direction: Option<Vec<f64>>,
    pub w: Vec<f64>,
    pub x_plus: Vec<f64>,
    pub x_minus: Vec<f64>,
    pub f_plus: f64,
    pub f_minus: f64,
    pub v: f64,
    pub eta: f64,
    /// `||g_t - g~_t||^2`.
    pub innov_sq: f64,
    /// `||g_t||^2`.
    pub g_sq: f64,
    /// `||g~_t||^2` before the update.
    pub opt_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub seed: u64,
    /// Cumulative `(f(x_t) + f(x'_t)) / 2`.
    pub loss_avg: f64,
    /// Cumulative `f(w_t)`.
    pub loss_center: f64,
    /// Against the best point of `X`.
    pub regret_avg: f64,
    /// Against the best point of the shrunk domain.
    pub regret_center: f64,
    /// Gradient variation, `None` when it has no closed form.
    pub v_t: Option<f64>,
    pub vbar_t: f64,
    pub f_t: Option<f64>,
    pub w_t: Option<VarianceMeasure>,
    pub wallclock_ms: u64,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunRecord {
    pub rows: Vec<TwoPointRow>,
    pub summary: Summary,
    pub delta: f64,
    pub shrink: f64,
}

impl RunRecord {
    pub fn centers(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.w.clone()).collect()
    }

    pub fn vbar_from_rows(&self) -> f64 {
        self.rows.iter().map(|r| r.innov_sq).sum()
    }
}
