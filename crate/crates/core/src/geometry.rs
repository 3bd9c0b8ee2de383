//! Feasible domains, shrinkage, projection and the shared random source.
//!
//! Shrinking a domain by `xi` means the image `{(1 - xi) x : x in X}`, i.e. scaling
//! about the origin. For boxes that keeps projection a componentwise clamp.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, Error, Result};
use crate::linalg::norm;

#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    Ball { radius: f64 },
    HyperRectangle { lower: Vec<f64>, upper: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    dim: usize,
    circumradius: f64,
    inradius: f64,
}

impl Domain {
    /// Centered Euclidean ball.
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            kind: DomainKind::Ball { radius },
            dim,
            circumradius: radius,
            inradius: radius,
        })
    }

    pub fn hyper_rectangle(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::InvalidInput(format!(
                    "box side {i}: need lower < upper, got [{l}, {u}]"
                )));
            }
        }
        // R is the largest norm over the set (a vertex); r the largest centered ball
        // inside it, zero when the origin is not interior.
        let circumradius = lower
            .iter()
            .zip(&upper)
            .map(|(l, u)| l.abs().max(u.abs()).powi(2))
            .sum::<f64>()
            .sqrt();
        let inradius = lower
            .iter()
            .zip(&upper)
            .map(|(l, u)| {
                if *l < 0.0 && *u > 0.0 {
                    (-l).min(*u)
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min);
        let dim = lower.len();
        Ok(Self {
            kind: DomainKind::HyperRectangle { lower, upper },
            dim,
            circumradius,
            inradius,
        })
    }

    /// `[-half_width, half_width]^dim`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        Self::hyper_rectangle(vec![-half_width; dim], vec![half_width; dim])
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest norm of a point in the set.
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// Radius of the largest origin-centered ball inside the set.
    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn bounds(&self) -> Option<(&[f64], &[f64])> {
        match &self.kind {
            DomainKind::HyperRectangle { lower, upper } => Some((lower, upper)),
            DomainKind::Ball { .. } => None,
        }
    }

    pub fn is_box(&self) -> bool {
        matches!(self.kind, DomainKind::HyperRectangle { .. })
    }

    /// Euclidean projection onto `(1 - shrink) X`.
    pub fn project(&self, shrink: f64, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        if !(0.0..1.0).contains(&shrink) {
            return Err(Error::InvalidInput(format!(
                "shrink must lie in [0,1), got {shrink}"
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "cannot project a non-finite point".into(),
            ));
        }
        let mut out = x.to_vec();
        self.project_in_place(shrink, &mut out);
        Ok(out)
    }

    /// Unchecked in-place projection for hot loops.
    pub(crate) fn project_in_place(&self, shrink: f64, x: &mut [f64]) {
        let s = 1.0 - shrink;
        match &self.kind {
            DomainKind::Ball { radius } => {
                let n = norm(x);
                let r = s * radius;
                if n > r {
                    let scale = r / n;
                    x.iter_mut().for_each(|v| *v *= scale);
                }
            }
            DomainKind::HyperRectangle { lower, upper } => {
                for ((v, l), u) in x.iter_mut().zip(lower).zip(upper) {
                    *v = v.clamp(s * l, s * u);
                }
            }
        }
    }

    /// Membership in `(1 - shrink) X` with absolute slack `tol`.
    pub fn contains(&self, shrink: f64, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let s = 1.0 - shrink;
        match &self.kind {
            DomainKind::Ball { radius } => norm(x) <= s * radius + tol,
            DomainKind::HyperRectangle { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (l, u))| *v >= s * l - tol && *v <= s * u + tol),
        }
    }

    /// All `2^d` vertices of a box, `None` for balls.
    pub fn vertices(&self) -> Option<Vec<Vec<f64>>> {
        let (lower, upper) = self.bounds()?;
        let d = self.dim;
        Some(
            (0..1usize << d)
                .map(|mask| {
                    (0..d)
                        .map(|i| {
                            if mask >> i & 1 == 1 {
                                upper[i]
                            } else {
                                lower[i]
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Draw a point of `(1 - shrink) X` (uniform on boxes, uniform in volume on balls).
    pub fn sample_point(&self, shrink: f64, rng: &mut Rng) -> Vec<f64> {
        let s = 1.0 - shrink;
        match &self.kind {
            DomainKind::Ball { radius } => {
                let u = rng.sample_unit_sphere(self.dim);
                let rad = s * radius * rng.uniform01().powf(1.0 / self.dim as f64);
                u.into_iter().map(|v| v * rad).collect()
            }
            DomainKind::HyperRectangle { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| s * (l + (u - l) * rng.uniform01()))
                .collect(),
        }
    }
}

/// Seeded generator: ChaCha8 (rand_chacha 0.9) seeded through `seed_from_u64`.
///
/// Learners and adversaries draw from separate streams of the same seed, so
/// changing how much randomness an adversary consumes never shifts a learner's
/// draws.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub const LEARNER_STREAM: u64 = 0;
    pub const ADVERSARY_STREAM: u64 = 1;

    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, Self::LEARNER_STREAM)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform coordinate index in `0..d` (0-based).
    pub fn sample_coordinate(&mut self, d: usize) -> usize {
        assert!(d >= 1, "sample_coordinate needs d >= 1");
        self.inner.random_range(0..d)
    }

    /// Uniform sign in `{-1, +1}`.
    pub fn sample_sign(&mut self) -> f64 {
        if self.inner.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }

    /// Uniform direction on the unit sphere, as normalized Gaussians.
    pub fn sample_unit_sphere(&mut self, d: usize) -> Vec<f64> {
        assert!(d >= 1, "sample_unit_sphere needs d >= 1");
        loop {
            let g: Vec<f64> = (0..d).map(|_| self.inner.sample(StandardNormal)).collect();
            let n = norm(&g);
            if n > 1e-150 {
                return g.into_iter().map(|v| v / n).collect();
            }
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform01(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform01()
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }
}
