//! Synthetic loss sequences.
//!
//! Every family is a quadratic `f_t(x) = 1/2 x'H_t x + b_t'x + c_t` whose Hessian is
//! shared by consecutive rounds (except across piecewise segment boundaries), so
//! gradient differences do not depend on `x` and the gradient variation has a
//! closed form.
//!
//! Learners get a [`ValueOracle`] and nothing else. Gradients, minimizers and
//! variation measures are for metrics.

use std::borrow::Cow;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{Domain, DomainKind, Rng};
use crate::linalg::{dist, dot, norm, norm_sq, operator_norm, symmetric_eig_range};

/// The bandit channel: the only access a learner has to the losses.
pub trait ValueOracle {
    fn dim(&self) -> usize;
    fn horizon(&self) -> usize;
    /// `f_t(x)` for `1 <= t <= horizon`.
    fn value(&self, t: usize, x: &[f64]) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    StationaryLinear {
        l: Vec<f64>,
    },
    LinearDrift {
        ls: Vec<Vec<f64>>,
    },
    /// `f_t(x) = 1/2 x'Ax + b_t'x`, `a` row-major symmetric PSD.
    QuadraticDrift {
        a: Vec<f64>,
        bs: Vec<Vec<f64>>,
    },
    /// `f_t(x) = lambda/2 ||x - c_t||^2`.
    StrongQuadratic {
        lambda: f64,
        centers: Vec<Vec<f64>>,
    },
    PiecewiseStationary {
        segments: Vec<Segment>,
    },
}

/// A block of `len` consecutive rounds. Drifting families inside a segment are
/// indexed from the segment start and must cover exactly `len` rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub len: usize,
    pub family: Family,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Gradient-norm bound on the domain.
    pub g: f64,
    /// Smoothness. Linear families declare 1 so that `G/L` and the exploration
    /// radius stay finite.
    pub l: f64,
    /// Strong convexity, 0 when absent.
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy)]
enum HessRef<'a> {
    Zero,
    Iso(f64),
    Dense(&'a [f64]),
}

#[derive(Debug, Clone, PartialEq)]
enum Hess {
    Zero,
    Iso(f64),
    Dense(Vec<f64>),
}

impl Hess {
    fn add(&mut self, h: HessRef<'_>, d: usize) {
        *self = match (std::mem::replace(self, Hess::Zero), h) {
            (acc, HessRef::Zero) => acc,
            (Hess::Zero, HessRef::Iso(s)) => Hess::Iso(s),
            (Hess::Iso(a), HessRef::Iso(s)) => Hess::Iso(a + s),
            (acc, h) => {
                let mut m = acc.to_dense(d);
                match h {
                    HessRef::Iso(s) => (0..d).for_each(|i| m[i * d + i] += s),
                    HessRef::Dense(a) => m.iter_mut().zip(a).for_each(|(x, y)| *x += y),
                    HessRef::Zero => {}
                }
                Hess::Dense(m)
            }
        };
    }

    fn to_dense(&self, d: usize) -> Vec<f64> {
        let mut m = vec![0.0; d * d];
        match self {
            Hess::Zero => {}
            Hess::Iso(s) => (0..d).for_each(|i| m[i * d + i] = *s),
            Hess::Dense(a) => m.copy_from_slice(a),
        }
        m
    }

    fn as_ref(&self) -> HessRef<'_> {
        match self {
            Hess::Zero => HessRef::Zero,
            Hess::Iso(s) => HessRef::Iso(*s),
            Hess::Dense(a) => HessRef::Dense(a),
        }
    }
}

fn hess_apply(h: HessRef<'_>, x: &[f64]) -> Vec<f64> {
    let d = x.len();
    match h {
        HessRef::Zero => vec![0.0; d],
        HessRef::Iso(s) => x.iter().map(|v| s * v).collect(),
        HessRef::Dense(a) => (0..d).map(|r| dot(&a[r * d..(r + 1) * d], x)).collect(),
    }
}

fn hess_norm(h: HessRef<'_>, d: usize) -> f64 {
    match h {
        HessRef::Zero => 0.0,
        HessRef::Iso(s) => s.abs(),
        HessRef::Dense(a) => operator_norm(a, d, d, 1e-13),
    }
}

fn hess_eq(a: HessRef<'_>, b: HessRef<'_>) -> bool {
    match (a, b) {
        (HessRef::Zero, HessRef::Zero) => true,
        (HessRef::Iso(x), HessRef::Iso(y)) => x == y,
        (HessRef::Dense(x), HessRef::Dense(y)) => x == y,
        (HessRef::Zero, HessRef::Iso(s)) | (HessRef::Iso(s), HessRef::Zero) => s == 0.0,
        _ => false,
    }
}

fn hess_sub(a: HessRef<'_>, b: HessRef<'_>, d: usize) -> Hess {
    match (a, b) {
        (HessRef::Zero, HessRef::Zero) => Hess::Zero,
        (HessRef::Iso(x), HessRef::Zero) => Hess::Iso(x),
        (HessRef::Zero, HessRef::Iso(y)) => Hess::Iso(-y),
        (HessRef::Iso(x), HessRef::Iso(y)) => Hess::Iso(x - y),
        _ => {
            let mut m = Hess::Zero;
            m.add(a, d);
            let mut neg = Hess::Zero;
            neg.add(b, d);
            let nb = neg.to_dense(d);
            let mut out = m.to_dense(d);
            out.iter_mut().zip(&nb).for_each(|(x, y)| *x -= y);
            Hess::Dense(out)
        }
    }
}

/// `max_{x in X} ||H x + b||` (exact on boxes via vertices or separability, exact
/// on balls for isotropic `H`, otherwise the bound `||H|| R + ||b||`).
fn max_affine_norm(h: HessRef<'_>, b: &[f64], domain: &Domain) -> f64 {
    let d = b.len();
    match (h, domain.kind()) {
        (HessRef::Zero, _) => norm(b),
        (HessRef::Iso(s), DomainKind::Ball { radius }) => s.abs() * radius + norm(b),
        (HessRef::Iso(s), DomainKind::HyperRectangle { lower, upper }) => (0..d)
            .map(|i| {
                (s * lower[i] + b[i])
                    .abs()
                    .max((s * upper[i] + b[i]).abs())
                    .powi(2)
            })
            .sum::<f64>()
            .sqrt(),
        (HessRef::Dense(_), DomainKind::HyperRectangle { .. }) if d <= 12 => domain
            .vertices()
            .expect("box has vertices")
            .iter()
            .map(|v| {
                let mut g = hess_apply(h, v);
                g.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                norm(&g)
            })
            .fold(0.0, f64::max),
        (HessRef::Dense(_), _) => hess_norm(h, d) * domain.circumradius() + norm(b),
    }
}

#[derive(Debug, Clone)]
pub struct LossSequence {
    family: Family,
    horizon: usize,
    dim: usize,
    constants: Constants,
    /// Start round (1-based) of each piecewise segment.
    starts: Vec<usize>,
}

/// Fixed comparator and its cumulative loss.
#[derive(Debug, Clone, PartialEq)]
pub struct BestFixed {
    pub x: Vec<f64>,
    pub total: f64,
}

/// Gradient-variance measure: exact when the sup is attained trivially, otherwise
/// to be replaced by a realized-sequence surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VarianceMeasure {
    Exact(f64),
    Surrogate(f64),
}

impl VarianceMeasure {
    pub fn value(self) -> f64 {
        match self {
            VarianceMeasure::Exact(v) | VarianceMeasure::Surrogate(v) => v,
        }
    }

    pub fn is_surrogate(self) -> bool {
        matches!(self, VarianceMeasure::Surrogate(_))
    }
}

impl LossSequence {
    /// Build a sequence over `horizon` rounds and compute its constants on `domain`.
    pub fn new(family: Family, horizon: usize, domain: &Domain) -> Result<Self> {
        let dim = domain.dim();
        validate_family(&family, horizon, dim, true)?;
        let starts = match &family {
            Family::PiecewiseStationary { segments } => {
                let mut s = Vec::with_capacity(segments.len());
                let mut next = 1;
                for seg in segments {
                    s.push(next);
                    next += seg.len;
                }
                s
            }
            _ => Vec::new(),
        };
        let mut seq = Self {
            family,
            horizon,
            dim,
            constants: Constants {
                g: 0.0,
                l: 1.0,
                lambda: 0.0,
            },
            starts,
        };
        seq.constants = seq.compute_constants(domain);
        Ok(seq)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn constants(&self) -> Constants {
        self.constants
    }

    /// Replace the declared constants (e.g. a looser `G`). Values below the
    /// computed ones are rejected.
    pub fn with_constants(mut self, c: Constants) -> Result<Self> {
        let own = self.constants;
        if c.g < own.g * (1.0 - 1e-12)
            || c.l < own.l * (1.0 - 1e-12)
            || c.lambda > own.lambda * (1.0 + 1e-12)
        {
            return Err(Error::InvalidInput(format!(
                "declared constants {c:?} are tighter than the computed {own:?}"
            )));
        }
        self.constants = c;
        Ok(self)
    }

    pub fn is_linear(&self) -> bool {
        (1..=self.horizon).all(|t| matches!(self.terms(t).0, HessRef::Zero))
    }

    fn check_round(&self, t: usize) -> Result<()> {
        if t == 0 || t > self.horizon {
            return Err(Error::RoundOutOfRange {
                t,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    /// Leaf family and local 0-based index for round `t`.
    fn locate(&self, t: usize) -> (&Family, usize) {
        match &self.family {
            Family::PiecewiseStationary { segments } => {
                let k = self.starts.partition_point(|&s| s <= t) - 1;
                (&segments[k].family, t - self.starts[k])
            }
            f => (f, t - 1),
        }
    }

    fn terms(&self, t: usize) -> (HessRef<'_>, Cow<'_, [f64]>) {
        let (fam, k) = self.locate(t);
        leaf_terms(fam, k)
    }

    /// `f_t(x) = 1/2 x'H x + b'x + const`; the constant is recovered by evaluation.
    pub fn gradient(&self, t: usize, x: &[f64]) -> Result<Vec<f64>> {
        self.check_round(t)?;
        check_dim(self.dim, x.len())?;
        let (h, b) = self.terms(t);
        let mut g = hess_apply(h, x);
        g.iter_mut().zip(b.iter()).for_each(|(u, v)| *u += v);
        Ok(g)
    }

    /// Exact `sum_{t>=2} sup_{x in X} ||grad f_t(x) - grad f_{t-1}(x)||^2`.
    pub fn gradient_variation(&self, domain: &Domain) -> Result<f64> {
        check_dim(self.dim, domain.dim())?;
        let mut total = 0.0;
        for t in 2..=self.horizon {
            let (h1, b1) = self.terms(t - 1);
            let (h2, b2) = self.terms(t);
            let db: Vec<f64> = b2.iter().zip(b1.iter()).map(|(a, b)| a - b).collect();
            if hess_eq(h1, h2) {
                total += norm_sq(&db);
                continue;
            }
            let dh = hess_sub(h2, h1, self.dim);
            let sup = match (&dh, domain.kind()) {
                (Hess::Dense(_), DomainKind::Ball { .. }) => {
                    return Err(Error::Unsupported(
                        "gradient variation across a non-isotropic Hessian change on a ball".into(),
                    ))
                }
                _ => max_affine_norm(dh.as_ref(), &db, domain),
            };
            total += sup * sup;
        }
        Ok(total)
    }

    /// `sum ||grad f_t - mean||^2` when the Hessian is shared by all rounds
    /// (then it does not depend on `x`); `Unsupported` otherwise.
    pub fn gradient_variance(&self) -> Result<f64> {
        if self.horizon == 0 {
            return Ok(0.0);
        }
        let h0 = self.terms(1).0;
        if !(2..=self.horizon).all(|t| hess_eq(h0, self.terms(t).0)) {
            return Err(Error::Unsupported(
                "gradient variance needs a shared Hessian".into(),
            ));
        }
        let mut mean = vec![0.0; self.dim];
        for t in 1..=self.horizon {
            mean.iter_mut()
                .zip(self.terms(t).1.iter())
                .for_each(|(m, b)| *m += b);
        }
        mean.iter_mut().for_each(|m| *m /= self.horizon as f64);
        Ok((1..=self.horizon)
            .map(|t| dist(&self.terms(t).1, &mean).powi(2))
            .sum())
    }

    /// `W_T`: exact when available, else the realized surrogate over `iterates`.
    pub fn variance_measure(&self, iterates: &[Vec<f64>]) -> Result<VarianceMeasure> {
        match self.gradient_variance() {
            Ok(v) => Ok(VarianceMeasure::Exact(v)),
            Err(Error::Unsupported(_)) => {
                if iterates.len() != self.horizon {
                    return Err(Error::InvalidInput("one iterate per round required".into()));
                }
                let grads: Vec<Vec<f64>> = iterates
                    .iter()
                    .enumerate()
                    .map(|(k, w)| self.gradient(k + 1, w))
                    .collect::<Result<_>>()?;
                let mut mean = vec![0.0; self.dim];
                for g in &grads {
                    mean.iter_mut()
                        .zip(g)
                        .for_each(|(m, v)| *m += v / grads.len() as f64);
                }
                Ok(VarianceMeasure::Surrogate(
                    grads.iter().map(|g| dist(g, &mean).powi(2)).sum(),
                ))
            }
            Err(e) => Err(e),
        }
    }

    /// `min f_t` over `X + margin * B`.
    pub fn per_round_min(&self, t: usize, domain: &Domain, margin: f64) -> Result<f64> {
        self.check_round(t)?;
        check_dim(self.dim, domain.dim())?;
        let (fam, k) = self.locate(t);
        match fam {
            Family::StationaryLinear { .. } | Family::LinearDrift { .. } => {
                let l = leaf_terms(fam, k).1;
                Ok(linear_min(&l, domain, 0.0) - margin * norm(&l))
            }
            Family::StrongQuadratic { lambda, centers } => {
                let c = &centers[k];
                let p = domain.project(0.0, c)?;
                let gap = (dist(c, &p) - margin).max(0.0);
                Ok(0.5 * lambda * gap * gap)
            }
            Family::QuadraticDrift { a, bs } => {
                let proj = |y: &mut [f64]| {
                    let mut p = y.to_vec();
                    domain.project_in_place(0.0, &mut p);
                    let r = dist(y, &p);
                    if r > margin {
                        let s = margin / r;
                        y.iter_mut()
                            .zip(&p)
                            .for_each(|(v, q)| *v = q + (*v - q) * s);
                    }
                };
                let x = minimize_quadratic(HessRef::Dense(a), &bs[k], vec![0.0; self.dim], proj);
                self.value(t, &x)
            }
            Family::PiecewiseStationary { .. } => unreachable!("segments are leaves"),
        }
    }

    /// `per_round_min` for every round. Dense quadratics repeat their linear terms
    /// under sign-flip drift, so solved rounds are memoized.
    pub fn per_round_minima(&self, domain: &Domain, margin: f64) -> Result<Vec<f64>> {
        let mut memo: std::collections::HashMap<(usize, Vec<u64>), f64> =
            std::collections::HashMap::new();
        let mut out = Vec::with_capacity(self.horizon);
        for t in 1..=self.horizon {
            let (fam, k) = self.locate(t);
            if let Family::QuadraticDrift { bs, .. } = fam {
                let key = (
                    fam as *const Family as usize,
                    bs[k].iter().map(|v| v.to_bits()).collect(),
                );
                if let Some(v) = memo.get(&key) {
                    out.push(*v);
                    continue;
                }
                let v = self.per_round_min(t, domain, margin)?;
                memo.insert(key, v);
                out.push(v);
            } else {
                out.push(self.per_round_min(t, domain, margin)?);
            }
        }
        Ok(out)
    }

    /// Minimizer of `sum_t f_t` over `(1 - shrink) X` and its total loss.
    pub fn best_fixed(&self, domain: &Domain, shrink: f64) -> Result<BestFixed> {
        self.best_fixed_range(domain, shrink, 1, self.horizon)
    }

    fn best_fixed_range(
        &self,
        domain: &Domain,
        shrink: f64,
        from: usize,
        to: usize,
    ) -> Result<BestFixed> {
        check_dim(self.dim, domain.dim())?;
        if !(0.0..1.0).contains(&shrink) {
            return Err(Error::InvalidInput(format!(
                "shrink must lie in [0,1), got {shrink}"
            )));
        }
        let d = self.dim;
        let mut h = Hess::Zero;
        let mut b = vec![0.0; d];
        for t in from..=to {
            let (ht, bt) = self.terms(t);
            h.add(ht, d);
            b.iter_mut().zip(bt.iter()).for_each(|(x, y)| *x += y);
        }
        let x = match &h {
            Hess::Zero => linear_argmin(&b, domain, shrink),
            Hess::Iso(s) if *s > 0.0 => {
                let target: Vec<f64> = b.iter().map(|v| -v / s).collect();
                domain.project(shrink, &target)?
            }
            Hess::Iso(_) => linear_argmin(&b, domain, shrink),
            Hess::Dense(_) => {
                let start = domain.project(shrink, &vec![0.0; d])?;
                minimize_quadratic(h.as_ref(), &b, start, |y| {
                    domain.project_in_place(shrink, y)
                })
            }
        };
        let mut total = 0.0;
        for t in from..=to {
            total += self.value(t, &x)?;
        }
        Ok(BestFixed { x, total })
    }

    /// Comparator sequence for dynamic regret: the minimizer over `(1 - shrink) X`
    /// of each piecewise segment, or of each single round for other families.
    pub fn comparators(&self, domain: &Domain, shrink: f64) -> Result<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(self.horizon);
        match &self.family {
            Family::PiecewiseStationary { segments } => {
                for (seg, &start) in segments.iter().zip(&self.starts) {
                    if seg.len == 0 {
                        continue;
                    }
                    let bf = self.best_fixed_range(domain, shrink, start, start + seg.len - 1)?;
                    out.extend(std::iter::repeat_n(bf.x, seg.len));
                }
            }
            _ => {
                for t in 1..=self.horizon {
                    out.push(self.best_fixed_range(domain, shrink, t, t)?.x);
                }
            }
        }
        Ok(out)
    }

    fn compute_constants(&self, domain: &Domain) -> Constants {
        let d = self.dim;
        let mut g: f64 = 0.0;
        let mut l: f64 = 0.0;
        let mut lambda = f64::INFINITY;
        let mut cache: Option<(usize, f64, f64)> = None;
        for t in 1..=self.horizon {
            let (h, b) = self.terms(t);
            g = g.max(max_affine_norm(h, &b, domain));
            // Curvature only changes between segments; cache per leaf.
            let key = match h {
                HessRef::Dense(a) => a.as_ptr() as usize,
                _ => 0,
            };
            let (hn, he) = match (h, cache) {
                (HessRef::Dense(_), Some((k, n, e))) if k == key => (n, e),
                (HessRef::Dense(a), _) => {
                    let n = operator_norm(a, d, d, 1e-13);
                    let e = symmetric_eig_range(a, d).0.max(0.0);
                    cache = Some((key, n, e));
                    (n, e)
                }
                (HessRef::Iso(s), _) => (s.abs(), s.max(0.0)),
                (HessRef::Zero, _) => (0.0, 0.0),
            };
            l = l.max(hn);
            lambda = lambda.min(he);
        }
        if !lambda.is_finite() {
            lambda = 0.0;
        }
        // Power iteration is accurate to ~1e-12 relative; keep lambda from
        // overstating curvature.
        if lambda < 1e-10 {
            lambda = 0.0;
        }
        Constants {
            g,
            l: if l > 1e-12 { l } else { 1.0 },
            lambda,
        }
    }
}

impl ValueOracle for LossSequence {
    fn dim(&self) -> usize {
        self.dim
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn value(&self, t: usize, x: &[f64]) -> Result<f64> {
        self.check_round(t)?;
        check_dim(self.dim, x.len())?;
        let (fam, k) = self.locate(t);
        Ok(match fam {
            Family::StationaryLinear { l } => dot(l, x),
            Family::LinearDrift { ls } => dot(&ls[k], x),
            Family::QuadraticDrift { a, bs } => {
                0.5 * dot(x, &hess_apply(HessRef::Dense(a), x)) + dot(&bs[k], x)
            }
            Family::StrongQuadratic { lambda, centers } => {
                0.5 * lambda * dist(x, &centers[k]).powi(2)
            }
            Family::PiecewiseStationary { .. } => unreachable!("segments are leaves"),
        })
    }
}

fn leaf_terms(fam: &Family, k: usize) -> (HessRef<'_>, Cow<'_, [f64]>) {
    match fam {
        Family::StationaryLinear { l } => (HessRef::Zero, Cow::Borrowed(l)),
        Family::LinearDrift { ls } => (HessRef::Zero, Cow::Borrowed(&ls[k])),
        Family::QuadraticDrift { a, bs } => (HessRef::Dense(a), Cow::Borrowed(&bs[k])),
        Family::StrongQuadratic { lambda, centers } => (
            HessRef::Iso(*lambda),
            Cow::Owned(centers[k].iter().map(|c| -lambda * c).collect()),
        ),
        Family::PiecewiseStationary { .. } => unreachable!("segments are leaves"),
    }
}

fn validate_family(f: &Family, len: usize, d: usize, top: bool) -> Result<()> {
    let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
    let rows = |vs: &[Vec<f64>], what: &str| -> Result<()> {
        if vs.len() != len {
            return Err(Error::InvalidInput(format!(
                "{what}: {} rounds given, horizon {len}",
                vs.len()
            )));
        }
        for v in vs {
            check_dim(d, v.len())?;
            if !finite(v) {
                return Err(Error::InvalidInput(format!("{what}: non-finite entry")));
            }
        }
        Ok(())
    };
    match f {
        Family::StationaryLinear { l } => {
            check_dim(d, l.len())?;
            if !finite(l) {
                return Err(Error::InvalidInput("non-finite loss vector".into()));
            }
        }
        Family::LinearDrift { ls } => rows(ls, "linear drift")?,
        Family::QuadraticDrift { a, bs } => {
            check_dim(d * d, a.len())?;
            for r in 0..d {
                for c in 0..r {
                    if (a[r * d + c] - a[c * d + r]).abs() > 1e-12 {
                        return Err(Error::InvalidInput(
                            "quadratic matrix must be symmetric".into(),
                        ));
                    }
                }
            }
            if !finite(a) || symmetric_eig_range(a, d).0 < -1e-9 {
                return Err(Error::InvalidInput("quadratic matrix must be PSD".into()));
            }
            rows(bs, "quadratic drift")?;
        }
        Family::StrongQuadratic { lambda, centers } => {
            if !(lambda.is_finite() && *lambda > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "strong convexity must be positive, got {lambda}"
                )));
            }
            rows(centers, "strong quadratic")?;
        }
        Family::PiecewiseStationary { segments } => {
            if !top {
                return Err(Error::InvalidInput("piecewise segments cannot nest".into()));
            }
            let total: usize = segments.iter().map(|s| s.len).sum();
            if total != len {
                return Err(Error::InvalidInput(format!(
                    "segments cover {total} rounds, horizon {len}"
                )));
            }
            for s in segments {
                validate_family(&s.family, s.len, d, false)?;
            }
        }
    }
    Ok(())
}

fn linear_min(l: &[f64], domain: &Domain, shrink: f64) -> f64 {
    let s = 1.0 - shrink;
    match domain.kind() {
        DomainKind::Ball { radius } => -s * radius * norm(l),
        DomainKind::HyperRectangle { lower, upper } => (0..l.len())
            .map(|i| s * (l[i] * lower[i]).min(l[i] * upper[i]))
            .sum(),
    }
}

fn linear_argmin(l: &[f64], domain: &Domain, shrink: f64) -> Vec<f64> {
    let s = 1.0 - shrink;
    match domain.kind() {
        DomainKind::Ball { radius } => {
            let n = norm(l);
            if n == 0.0 {
                vec![0.0; l.len()]
            } else {
                l.iter().map(|v| -s * radius * v / n).collect()
            }
        }
        DomainKind::HyperRectangle { lower, upper } => (0..l.len())
            .map(|i| {
                if l[i] > 0.0 {
                    s * lower[i]
                } else if l[i] < 0.0 {
                    s * upper[i]
                } else {
                    0.0f64.clamp(s * lower[i], s * upper[i])
                }
            })
            .collect(),
    }
}

/// Accelerated projected gradient on `1/2 x'Hx + b'x` until the projected-gradient
/// step moves less than `1e-10` (relative to the step length `1/||H||`).
fn minimize_quadratic(
    h: HessRef<'_>,
    b: &[f64],
    start: Vec<f64>,
    project: impl Fn(&mut [f64]),
) -> Vec<f64> {
    let d = b.len();
    let lip = hess_norm(h, d).max(1e-300);
    let step = 1.0 / lip;
    let obj = |x: &[f64]| 0.5 * dot(x, &hess_apply(h, x)) + dot(b, x);
    let mut x = start;
    project(&mut x);
    let mut y = x.clone();
    let mut theta = 1.0f64;
    let mut fx = obj(&x);
    for _ in 0..2_000_000 {
        let mut gy = hess_apply(h, &y);
        gy.iter_mut().zip(b).for_each(|(g, v)| *g += v);
        let mut next: Vec<f64> = y.iter().zip(&gy).map(|(v, g)| v - step * g).collect();
        project(&mut next);
        let fnext = obj(&next);
        let moved = dist(&next, &y);
        if fnext > fx {
            // Adaptive restart keeps the acceleration monotone.
            y = x.clone();
            theta = 1.0;
            continue;
        }
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let beta = (theta - 1.0) / theta_next;
        y = next
            .iter()
            .zip(&x)
            .map(|(n, o)| n + beta * (n - o))
            .collect();
        x = next;
        fx = fnext;
        theta = theta_next;
        if moved <= 1e-10 * (1.0 + norm(&x)) {
            break;
        }
    }
    x
}

/// Generators for drifting adversaries with controllable variation.
pub mod drift {
    use super::*;

    /// `l_t = base + scale * eps_t` with independent Rademacher signs per coordinate.
    /// Consecutive differences are `2 scale` on about half the coordinates, so
    /// `E[V_T] = 2 d scale^2 (T - 1)`.
    pub fn rademacher_linear(base: &[f64], scale: f64, horizon: usize, rng: &mut Rng) -> Family {
        let ls = (0..horizon)
            .map(|_| base.iter().map(|b| b + scale * rng.sample_sign()).collect())
            .collect();
        Family::LinearDrift { ls }
    }

    /// Alternates between `a` and `b` over `switches + 1` near-equal blocks, giving
    /// `V_T = switches * ||a - b||^2`.
    pub fn switching_linear(a: &[f64], b: &[f64], switches: usize, horizon: usize) -> Family {
        let blocks = switches + 1;
        let ls = (0..horizon)
            .map(|k| {
                if (k * blocks / horizon.max(1)) % 2 == 0 {
                    a.to_vec()
                } else {
                    b.to_vec()
                }
            })
            .collect();
        Family::LinearDrift { ls }
    }

    /// Centers moving on a circle of `radius` around `c0` in the first two
    /// coordinates, one revolution every `period` rounds.
    pub fn circular_centers(
        lambda: f64,
        c0: &[f64],
        radius: f64,
        period: f64,
        horizon: usize,
    ) -> Family {
        let centers = (1..=horizon)
            .map(|t| {
                let phase = std::f64::consts::TAU * t as f64 / period;
                let mut c = c0.to_vec();
                c[0] += radius * phase.cos();
                if c.len() > 1 {
                    c[1] += radius * phase.sin();
                }
                c
            })
            .collect();
        Family::StrongQuadratic { lambda, centers }
    }

    /// Strongly convex quadratics centered at `c0 + scale * eps_t` with independent
    /// Rademacher signs; unlike [`circular_centers`] no moving comparator can track
    /// them, so static regret stays positive.
    pub fn rademacher_centers(
        lambda: f64,
        c0: &[f64],
        scale: f64,
        horizon: usize,
        rng: &mut Rng,
    ) -> Family {
        let centers = (0..horizon)
            .map(|_| c0.iter().map(|c| c + scale * rng.sample_sign()).collect())
            .collect();
        Family::StrongQuadratic { lambda, centers }
    }

    /// Quadratic with fixed `a` and `b_t = base + scale * eps_t`.
    pub fn rademacher_quadratic(
        a: &[f64],
        base: &[f64],
        scale: f64,
        horizon: usize,
        rng: &mut Rng,
    ) -> Family {
        let bs = (0..horizon)
            .map(|_| base.iter().map(|b| b + scale * rng.sample_sign()).collect())
            .collect();
        Family::QuadraticDrift { a: a.to_vec(), bs }
    }
}
