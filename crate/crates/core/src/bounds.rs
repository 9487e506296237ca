//! Lower bounds on the minimum error probability of M-ary hypothesis testing.
//!
//! The central quantity is the tilted-posterior bound
//!
//! ```text
//! (1 - α) · P[ P^(θ)(X|Y) ≤ α ],   P^(θ)(x|y) = P(x|y)^θ / Σ_x' P(x'|y)^θ
//! ```
//!
//! which for θ = 1 is the classical information-spectrum bound, and its
//! θ → ∞ limit, which is exact for MAP decoding whenever the MAP decision is
//! unique. Closed forms for the binary erasure and binary-input Gaussian
//! channels and the Fano baselines live here as well.

use crate::error::{invalid, Error, Result};
use crate::prob::{check_theta, JointFiniteModel, ThetaRange, TIE_TOL};

/// Relative slack on the event `P^(θ)(x|y) ≤ α`, applied in the log domain.
///
/// Without it, an α that equals a posterior value on paper (0.4 vs 0.4/1.0)
/// can land on either side of the comparison depending on rounding.
pub const EVENT_LOG_TOL: f64 = 1e-12;

/// Tilt exponent for a bound evaluation: finite, or the θ → ∞ limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Finite(f64),
    Limit,
}

impl std::fmt::Display for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Theta::Finite(t) => write!(f, "{t}"),
            Theta::Limit => f.write_str("limit"),
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        invalid(format!("alpha {alpha} outside [0,1]"))
    }
}

/// Exact MAP error `1 - Σ_y max_x P_XY(x,y)`.
///
/// Summed as the mass of the non-maximal entries so small errors keep their
/// relative precision.
pub fn map_error(m: &JointFiniteModel) -> f64 {
    let mut err = 0.0;
    for y in 0..m.ny() {
        let mut best = 0;
        for x in 1..m.nx() {
            if m.log_joint(x, y) > m.log_joint(best, y) {
                best = x;
            }
        }
        for x in 0..m.nx() {
            if x != best {
                err += m.joint(x, y);
            }
        }
    }
    err
}

/// Joint masses of a model keyed by their tilted posterior, sorted so that
/// the event probability for any α is a prefix sum.
#[derive(Debug, Clone)]
pub struct TiltedSpectrum {
    log_tilted: Vec<f64>,
    prefix: Vec<f64>,
}

impl TiltedSpectrum {
    pub fn new(m: &JointFiniteModel, theta: f64) -> Result<Self> {
        check_theta(theta, ThetaRange::AtLeastOne)?;
        let mut pairs = Vec::new();
        for y in 0..m.ny() {
            let lpy = m.log_output(y);
            if lpy == f64::NEG_INFINITY {
                continue;
            }
            let lpost: Vec<f64> = (0..m.nx()).map(|x| m.log_joint(x, y) - lpy).collect();
            let tilted = crate::prob::tilt_log(&lpost, theta);
            for x in 0..m.nx() {
                let lj = m.log_joint(x, y);
                if lj > f64::NEG_INFINITY {
                    pairs.push((tilted[x], lj.exp()));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut prefix = Vec::with_capacity(pairs.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &(_, mass) in &pairs {
            acc += mass;
            prefix.push(acc);
        }
        Ok(TiltedSpectrum { log_tilted: pairs.into_iter().map(|p| p.0).collect(), prefix })
    }

    /// `P[P^(θ)(X|Y) ≤ α]`.
    pub fn event_probability(&self, alpha: f64) -> f64 {
        let cut = alpha.ln() + EVENT_LOG_TOL;
        let k = self.log_tilted.partition_point(|&l| l <= cut);
        self.prefix[k]
    }

    pub fn bound(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok((1.0 - alpha) * self.event_probability(alpha))
    }

    /// Candidate maximizers: every tilted posterior value, each value nudged
    /// just below itself, and 0.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        for &l in &self.log_tilted {
            let t = l.exp();
            out.push(t.min(1.0));
            if t > TIE_TOL {
                out.push(t - TIE_TOL);
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// The tilted-posterior lower bound on the MAP error for θ ≥ 1.
pub fn gpv_bound(m: &JointFiniteModel, theta: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    TiltedSpectrum::new(m, theta)?.bound(alpha)
}

/// Per-observation data needed by the θ → ∞ limit.
fn limit_profiles(m: &JointFiniteModel) -> Result<Vec<(f64, usize, f64)>> {
    let mut out = Vec::new();
    for y in 0..m.ny() {
        let lpy = m.log_output(y);
        if lpy == f64::NEG_INFINITY {
            continue;
        }
        let prof = m.posterior_profile(y)?;
        out.push((lpy.exp(), prof.ell(), prof.top_mass()));
    }
    Ok(out)
}

fn limit_value(profiles: &[(f64, usize, f64)], alpha: f64, prefactor: bool) -> f64 {
    let covered: f64 =
        profiles.iter().filter(|(_, ell, _)| 1.0 / *ell as f64 > alpha).map(|(py, _, top)| py * top).sum();
    let v = (1.0 - covered).max(0.0);
    if prefactor {
        (1.0 - alpha) * v
    } else {
        v
    }
}

/// The θ → ∞ limit `1 - Σ_y P_Y(y) [Σ_{j ≤ ℓ(y)} h_j(y)] 1{1/ℓ(y) > α}`,
/// optionally multiplied by `(1 - α)`.
pub fn gpv_bound_limit(m: &JointFiniteModel, alpha: f64, prefactor: bool) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(limit_value(&limit_profiles(m)?, alpha, prefactor))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniqueMapLimit {
    /// True when every observation of positive probability has a single
    /// maximum-posterior hypothesis.
    pub map_unique: bool,
    /// The limit bound without the `(1 - α)` factor.
    pub value: f64,
}

/// When the MAP decision is unique, the limit bound equals the MAP error for
/// every α in [0, 1).
pub fn unique_map_limit(m: &JointFiniteModel, alpha: f64) -> Result<UniqueMapLimit> {
    check_alpha(alpha)?;
    let profiles = limit_profiles(m)?;
    Ok(UniqueMapLimit { map_unique: profiles.iter().all(|p| p.1 == 1), value: limit_value(&profiles, alpha, false) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaOptimum {
    pub alpha: f64,
    pub value: f64,
}

/// Maximizes the bound over α exactly, by evaluating every breakpoint of the
/// piecewise-linear map α ↦ bound. Ties go to the smallest α.
pub fn maximize_over_alpha(m: &JointFiniteModel, theta: Theta) -> Result<AlphaOptimum> {
    let mut best = AlphaOptimum { alpha: 0.0, value: f64::NEG_INFINITY };
    let mut consider = |alpha: f64, value: f64| {
        if value > best.value {
            best = AlphaOptimum { alpha, value };
        }
    };
    match theta {
        Theta::Finite(t) => {
            let spec = TiltedSpectrum::new(m, t)?;
            for a in spec.breakpoints() {
                consider(a, spec.bound(a)?);
            }
        }
        Theta::Limit => {
            let profiles = limit_profiles(m)?;
            let mut cands: Vec<f64> = profiles.iter().map(|p| 1.0 / p.1 as f64).collect();
            cands.push(0.0);
            cands.sort_by(f64::total_cmp);
            cands.dedup();
            for a in cands {
                consider(a, limit_value(&profiles, a, true));
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoBounds {
    /// From `h_b(P_e) + P_e log(|X|-1) ≥ H(X|Y)`, loosened to
    /// `(H(X|Y) - log 2) / log(|X|-1)`; for |X| = 2 the binary-entropy
    /// inequality is inverted exactly.
    pub original: f64,
    /// `(H(X|Y) - log 2) / log|X|`, which is `1 - (I + log 2)/log|X|` for
    /// a uniform prior.
    pub weakened: f64,
}

/// Fano lower bounds on the MAP error, clamped at 0.
///
/// For a uniform ternary prior the original bound is the familiar
/// `(log 3 - I - log 2)/log 2`.
pub fn fano_bounds(m: &JointFiniteModel) -> Result<FanoBounds> {
    if m.nx() < 2 {
        return invalid("Fano bounds need at least two hypotheses");
    }
    let equivocation = (m.prior().entropy() - m.mutual_information()).max(0.0);
    let ln2 = std::f64::consts::LN_2;
    let original = if m.nx() == 2 {
        inverse_binary_entropy(equivocation)
    } else {
        (equivocation - ln2) / ((m.nx() - 1) as f64).ln()
    };
    Ok(FanoBounds { original: original.max(0.0), weakened: ((equivocation - ln2) / (m.nx() as f64).ln()).max(0.0) })
}

/// Smallest `p ∈ [0, 1/2]` with `h_b(p) ≥ h` (nats).
fn inverse_binary_entropy(h: f64) -> f64 {
    let hb = |p: f64| crate::channels::binary_entropy(p).unwrap_or(0.0);
    if h >= std::f64::consts::LN_2 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0, 0.5);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if hb(mid) >= h {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Closed form of the tilted bound for the binary erasure channel with
/// erasure probability `eps` and input prior `P(X=1) = p < 1/2`.
pub fn bec_bound(eps: f64, p: f64, theta: f64, alpha: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("erasure probability {eps} outside (0,1)"));
    }
    if !(p > 0.0 && p < 0.5) {
        return invalid(format!("prior {p} outside (0,1/2)"));
    }
    check_theta(theta, ThetaRange::AtLeastOne)?;
    check_alpha(alpha)?;
    // Tilted posteriors after an erasure: p^θ/(p^θ+(1-p)^θ) and its complement.
    let odds = theta * ((1.0 - p) / p).ln();
    let log_lo = -softplus(odds);
    let log_hi = -softplus(-odds);
    let la = alpha.ln() + EVENT_LOG_TOL;
    Ok(if la < log_lo {
        0.0
    } else if la < log_hi {
        eps * p * (1.0 - alpha)
    } else {
        eps * (1.0 - alpha)
    })
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        invalid(format!("noise level {sigma} must be positive"))
    }
}

/// Closed form of the tilted bound for equiprobable ±1 signalling over
/// additive Gaussian noise of standard deviation `sigma`.
pub fn awgn_bound(sigma: f64, theta: f64, alpha: f64) -> Result<f64> {
    check_sigma(sigma)?;
    check_theta(theta, ThetaRange::AtLeastOne)?;
    check_alpha(alpha)?;
    if alpha == 0.0 || alpha == 1.0 {
        return Ok(0.0);
    }
    let log_odds = (-alpha).ln_1p() - alpha.ln();
    let z = -(sigma / (2.0 * theta)) * log_odds - 1.0 / sigma;
    Ok((1.0 - alpha) * normal_cdf(z))
}

/// MAP error of the same Gaussian model, `Φ(-1/σ)`.
pub fn awgn_map_error(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(normal_cdf(-1.0 / sigma))
}

/// A sampled curve ready for export.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub abscissa: String,
    pub points: Vec<(f64, f64)>,
    pub metadata: Vec<(String, String)>,
}

impl BoundCurve {
    /// Abscissas must be strictly increasing and every value finite.
    pub fn new(abscissa: impl Into<String>, points: Vec<(f64, f64)>, metadata: Vec<(String, String)>) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return invalid("abscissas must be strictly increasing");
            }
        }
        if let Some(&(x, _)) = points.iter().find(|(x, v)| !x.is_finite() || !v.is_finite()) {
            return Err(Error::NumericFailure { at: x });
        }
        Ok(BoundCurve { abscissa: abscissa.into(), points, metadata })
    }
}

pub mod oracle {
    //! Naive linear-domain re-implementation of the tilted bound, kept
    //! deliberately separate from the sorted log-domain evaluator so the two
    //! can check each other.

    use crate::prob::JointFiniteModel;

    pub fn brute_force_bound(m: &JointFiniteModel, theta: f64, alpha: f64) -> f64 {
        let mut event = 0.0;
        for y in 0..m.ny() {
            let col: Vec<f64> = (0..m.nx()).map(|x| m.joint(x, y)).collect();
            let py: f64 = col.iter().sum();
            if py == 0.0 {
                continue;
            }
            let top = col.iter().cloned().fold(0.0, f64::max) / py;
            let powered: Vec<f64> = col.iter().map(|j| (j / py / top).powf(theta)).collect();
            let norm: f64 = powered.iter().sum();
            for x in 0..m.nx() {
                if powered[x] / norm <= alpha * (1.0 + 1e-12) {
                    event += col[x];
                }
            }
        }
        (1.0 - alpha) * event
    }
}
