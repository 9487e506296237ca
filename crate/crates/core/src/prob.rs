//! Finite probability primitives: log-domain pmfs, tilting, joint models and
//! posterior profiles.
//!
//! Masses are stored as natural logarithms so that tilting by large exponents
//! (θ = 100 and beyond) never underflows; a zero mass is `-inf`.

use crate::error::{invalid, Error, Result};

/// Inputs whose total mass is within this distance of 1 are renormalized
/// silently; anything further off is rejected.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Two log-posteriors closer than this are treated as tied.
pub const TIE_TOL: f64 = 1e-9;

/// Cap on the number of stored entries of any enumerated model.
pub const MAX_ENTRIES: usize = 10_000_000;

/// Running log-sum-exp that never overflows and skips `-inf` terms.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum { max: f64::NEG_INFINITY, scaled: 0.0 }
    }

    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.scaled += (x - self.max).exp();
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let mut acc = LogSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Which tilt exponents are accepted.
///
/// The bounds in this crate are only proven for θ ≥ 1, so that is the
/// default. `Positive` exists for exploratory use of the tilt itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaRange {
    #[default]
    AtLeastOne,
    Positive,
}

pub(crate) fn check_theta(theta: f64, range: ThetaRange) -> Result<()> {
    let ok = match range {
        ThetaRange::AtLeastOne => theta.is_finite() && theta >= 1.0,
        ThetaRange::Positive => theta.is_finite() && theta > 0.0,
    };
    if ok {
        Ok(())
    } else {
        invalid(format!("tilt exponent {theta} outside {range:?}"))
    }
}

/// A probability mass function on `{0, …, n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    log_mass: Vec<f64>,
}

impl Pmf {
    /// Builds a pmf from linear-domain masses.
    pub fn from_probs(probs: &[f64]) -> Result<Pmf> {
        if probs.is_empty() {
            return invalid("empty distribution");
        }
        let mut sum = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return invalid(format!("mass {p} at index {i}"));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let log_sum = sum.ln();
        Ok(Pmf { log_mass: probs.iter().map(|p| p.ln() - log_sum).collect() })
    }

    /// Builds a pmf from log masses that should already be normalized.
    pub fn from_log_masses(log_mass: Vec<f64>) -> Result<Pmf> {
        let total = checked_lse(&log_mass)?;
        let sum = total.exp();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self::shifted(log_mass, total))
    }

    /// Normalizes arbitrary log weights. Fails only if every weight is zero.
    pub fn from_log_weights(log_weights: Vec<f64>) -> Result<Pmf> {
        let total = checked_lse(&log_weights)?;
        Ok(Self::shifted(log_weights, total))
    }

    fn shifted(mut v: Vec<f64>, total: f64) -> Pmf {
        for x in v.iter_mut() {
            *x -= total;
        }
        Pmf { log_mass: v }
    }

    pub fn uniform(n: usize) -> Result<Pmf> {
        if n == 0 {
            return invalid("empty distribution");
        }
        Ok(Pmf { log_mass: vec![-(n as f64).ln(); n] })
    }

    pub fn point_mass(n: usize, at: usize) -> Result<Pmf> {
        if at >= n {
            return invalid(format!("point mass at {at} outside alphabet of size {n}"));
        }
        let mut v = vec![f64::NEG_INFINITY; n];
        v[at] = 0.0;
        Ok(Pmf { log_mass: v })
    }

    /// Bernoulli pmf on {0, 1} with `P(1) = p`.
    pub fn bernoulli(p: f64) -> Result<Pmf> {
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("Bernoulli parameter {p} outside [0,1]"));
        }
        Pmf::from_probs(&[1.0 - p, p])
    }

    pub fn len(&self) -> usize {
        self.log_mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_mass.is_empty()
    }

    pub fn log_mass(&self, i: usize) -> f64 {
        self.log_mass[i]
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.log_mass[i].exp()
    }

    pub fn log_masses(&self) -> &[f64] {
        &self.log_mass
    }

    pub fn masses(&self) -> Vec<f64> {
        self.log_mass.iter().map(|l| l.exp()).collect()
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        self.log_mass.iter().filter(|l| l.is_finite()).map(|&l| -l.exp() * l).sum()
    }

    /// The tilted pmf `p^θ / Σ p^θ` for θ ≥ 1.
    pub fn tilt(&self, theta: f64) -> Result<Pmf> {
        self.tilt_with(theta, ThetaRange::AtLeastOne)
    }

    pub fn tilt_with(&self, theta: f64, range: ThetaRange) -> Result<Pmf> {
        check_theta(theta, range)?;
        Ok(Pmf { log_mass: tilt_log(&self.log_mass, theta) })
    }

    /// The n-fold i.i.d. product, indexed lexicographically with the first
    /// coordinate most significant.
    pub fn power(&self, n: usize) -> Result<Pmf> {
        if n == 0 {
            return invalid("product length must be positive");
        }
        let size = (self.len() as f64).powi(n as i32);
        if size > MAX_ENTRIES as f64 {
            return Err(Error::SizeCap { needed: size, cap: MAX_ENTRIES });
        }
        let mut out = vec![0.0];
        for _ in 0..n {
            out = out.iter().flat_map(|&acc| self.log_mass.iter().map(move |&l| acc + l)).collect();
        }
        Ok(Pmf { log_mass: out })
    }
}

fn checked_lse(v: &[f64]) -> Result<f64> {
    if v.is_empty() {
        return invalid("empty distribution");
    }
    if v.iter().any(|x| x.is_nan() || *x == f64::INFINITY) {
        return invalid("log mass is NaN or +inf");
    }
    let total = log_sum_exp(v);
    if total == f64::NEG_INFINITY {
        return invalid("all masses are zero");
    }
    Ok(total)
}

/// Tilts normalized-or-not log weights; zero entries stay zero.
pub(crate) fn tilt_log(log_mass: &[f64], theta: f64) -> Vec<f64> {
    let scaled: Vec<f64> = log_mass.iter().map(|&l| if l == f64::NEG_INFINITY { l } else { theta * l }).collect();
    let total = log_sum_exp(&scaled);
    scaled.into_iter().map(|l| l - total).collect()
}

/// A prior on `{0..nx}` together with a likelihood matrix `P(y|x)`.
#[derive(Debug, Clone)]
pub struct JointFiniteModel {
    prior: Pmf,
    nx: usize,
    ny: usize,
    log_lik: Vec<f64>,
    log_joint: Vec<f64>,
    log_py: Vec<f64>,
}

impl JointFiniteModel {
    /// Builds a model from linear-domain likelihood rows.
    pub fn new(prior: Pmf, likelihood: &[Vec<f64>]) -> Result<Self> {
        if likelihood.len() != prior.len() {
            return invalid(format!("prior has {} entries but likelihood has {} rows", prior.len(), likelihood.len()));
        }
        let ny = likelihood.first().map_or(0, |r| r.len());
        let mut log_lik = Vec::with_capacity(prior.len() * ny);
        for row in likelihood {
            if row.len() != ny {
                return invalid("likelihood rows have different lengths");
            }
            log_lik.extend_from_slice(Pmf::from_probs(row)?.log_masses());
        }
        Self::from_log_rows(prior, ny, log_lik)
    }

    /// Builds a model from a row-major log-likelihood matrix.
    pub fn from_log_rows(prior: Pmf, ny: usize, mut log_lik: Vec<f64>) -> Result<Self> {
        let nx = prior.len();
        if ny == 0 || log_lik.len() != nx * ny {
            return invalid("likelihood matrix has the wrong shape");
        }
        if nx as f64 * ny as f64 > MAX_ENTRIES as f64 {
            return Err(Error::SizeCap { needed: nx as f64 * ny as f64, cap: MAX_ENTRIES });
        }
        for row in log_lik.chunks_mut(ny) {
            let total = checked_lse(row)?;
            if (total.exp() - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::NotNormalized { sum: total.exp() });
            }
            for l in row.iter_mut() {
                *l -= total;
            }
        }
        let mut log_joint = vec![0.0; nx * ny];
        for x in 0..nx {
            for y in 0..ny {
                log_joint[x * ny + y] = prior.log_mass(x) + log_lik[x * ny + y];
            }
        }
        let log_py = (0..ny)
            .map(|y| {
                let mut acc = LogSum::new();
                for x in 0..nx {
                    acc.add(log_joint[x * ny + y]);
                }
                acc.value()
            })
            .collect();
        Ok(JointFiniteModel { prior, nx, ny, log_lik, log_joint, log_py })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn prior(&self) -> &Pmf {
        &self.prior
    }

    pub fn log_likelihood(&self, x: usize, y: usize) -> f64 {
        self.log_lik[x * self.ny + y]
    }

    pub fn log_joint(&self, x: usize, y: usize) -> f64 {
        self.log_joint[x * self.ny + y]
    }

    pub fn joint(&self, x: usize, y: usize) -> f64 {
        self.log_joint(x, y).exp()
    }

    pub fn log_output(&self, y: usize) -> f64 {
        self.log_py[y]
    }

    pub fn output_marginal(&self) -> Pmf {
        Pmf { log_mass: self.log_py.clone() }
    }

    /// Log posteriors `log P(x|y)` for an observation of positive probability.
    pub fn log_posteriors(&self, y: usize) -> Result<Vec<f64>> {
        if y >= self.ny {
            return invalid(format!("observation {y} outside alphabet of size {}", self.ny));
        }
        let lpy = self.log_py[y];
        if lpy == f64::NEG_INFINITY {
            return Err(Error::ZeroProbabilityObservation { y });
        }
        Ok((0..self.nx).map(|x| self.log_joint(x, y) - lpy).collect())
    }

    pub fn posterior(&self, y: usize) -> Result<Pmf> {
        Ok(Pmf { log_mass: self.log_posteriors(y)? })
    }

    pub fn posterior_profile(&self, y: usize) -> Result<PosteriorProfile> {
        Ok(PosteriorProfile::new(&self.log_posteriors(y)?, TIE_TOL))
    }

    /// Mutual information `I(X;Y)` in nats.
    pub fn mutual_information(&self) -> f64 {
        let mut total = 0.0;
        for x in 0..self.nx {
            for y in 0..self.ny {
                let lj = self.log_joint(x, y);
                if lj.is_finite() {
                    total += lj.exp() * (self.log_likelihood(x, y) - self.log_py[y]);
                }
            }
        }
        total.max(0.0)
    }
}

/// Posterior values sorted in non-increasing order, plus the multiplicity of
/// the maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorProfile {
    log_values: Vec<f64>,
    order: Vec<usize>,
    ell: usize,
}

impl PosteriorProfile {
    /// Sorts the given log posteriors; equal values keep index order.
    pub fn new(log_posteriors: &[f64], tie_tol: f64) -> PosteriorProfile {
        let mut order: Vec<usize> = (0..log_posteriors.len()).collect();
        order.sort_by(|&a, &b| log_posteriors[b].total_cmp(&log_posteriors[a]));
        let log_values: Vec<f64> = order.iter().map(|&i| log_posteriors[i]).collect();
        let top = log_values[0];
        let ell = log_values.iter().take_while(|&&l| top - l <= tie_tol).count();
        PosteriorProfile { log_values, order, ell }
    }

    pub fn from_pmf(pmf: &Pmf, tie_tol: f64) -> PosteriorProfile {
        Self::new(pmf.log_masses(), tie_tol)
    }

    pub fn values(&self) -> Vec<f64> {
        self.log_values.iter().map(|l| l.exp()).collect()
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    /// Original indices in sorted order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Number of hypotheses tied with the maximum posterior.
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Sum of the `ell` largest posteriors.
    pub fn top_mass(&self) -> f64 {
        self.log_values[..self.ell].iter().map(|l| l.exp()).sum()
    }
}
