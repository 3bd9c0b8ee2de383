//! Gradient-variation bandit convex optimization.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: feasible domains (balls and hyper-rectangles), shrinkage,
//!   Euclidean projection and the seeded random source shared by every learner.
//! - [`adversary`]: synthetic loss sequences. Learners only ever see them through
//!   the [`adversary::ValueOracle`] trait; gradients, minimizers and variation
//!   measures are reserved for metrics.
//! - [`estimator2p`]: the two-point coordinate estimator with its optimism buffer.
//! - [`oogd`]: optimistic online gradient descent and its step-size schedules.
//! - [`bco2p`]: end-to-end two-point runners, plus the sphere-sampling baseline.
//! - [`blo1p`]: one-point bandit linear optimization over boxes (log-barrier FTRL).
//! - [`ensemble`]: dynamic-regret (Optimistic-Hedge) and universal
//!   (Optimistic-Adapt-ML-Prod) meta learners.
//! - [`game`]: bandit bilinear zero-sum games between two one-point learners.
//! - [`metrics`]: regret, path length, variation measures and slope fits.

pub mod adversary;
pub mod bco2p;
pub mod blo1p;
pub mod ensemble;
pub mod error;
pub mod estimator2p;
pub mod game;
pub mod geometry;
pub mod linalg;
pub mod metrics;
pub mod oogd;
pub mod record;

pub use error::{Error, Result};
pub use geometry::{Domain, DomainKind, Rng};
