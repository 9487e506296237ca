//! Exponents of the tilted converse: the Chernoff-type lower bound
//! `F(R, θ)` on the exponent of the tilted bound, and the sphere-packing
//! exponent for comparison.
//!
//! For an input distribution `P` and `ρ < 0`,
//!
//! ```text
//! F(R, θ) ≥ ρR - log Σ_x Σ_y P(x) W(y|x)^{1+ρθ} / (Σ_x' P(x') W(y|x')^θ)^ρ
//! ```
//!
//! Binary channels are searched in the variable `s = 1/(1-ρ) ∈ (0,1)` and the
//! input bias `p = P(X=1)` restricted to `h_b(p) > R`. Every objective is
//! evaluated in the log domain; `ε^{1+θ-θ/s}` overflows for small `s`.

use crate::channels::{binary_entropy, bsc_capacity, z_capacity, Dmc};
use crate::error::{invalid, Error, Result};
use crate::optimize::maximize_scalar;
use crate::prob::{check_theta, log_sum_exp, LogSum, Pmf, ThetaRange};

/// Search schedule. The outer scan is global; the inner searches rely on
/// unimodality (concavity in ρ for F, convexity in p for the sphere-packing
/// inner infimum).
pub const S_LO: f64 = 1e-6;
pub const S_HI: f64 = 1.0 - 1e-6;
pub const S_GRID: usize = 512;
pub const P_GRID: usize = 2048;
const INNER_GRID: usize = 64;
const REFINE_TOL: f64 = 1e-10;
/// `h_b(p) > R` is enforced as `h_b(p) ≥ R + FEASIBILITY_MARGIN`.
pub const FEASIBILITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPoint {
    pub rate: f64,
    pub value: f64,
    /// `None` for the sphere-packing exponent.
    pub theta: Option<f64>,
    pub s_star: f64,
    pub p_star: Option<f64>,
    /// The raw supremum was negative and has been replaced by 0.
    pub clamped: bool,
}

impl ExponentPoint {
    fn new(rate: f64, raw: f64, theta: Option<f64>, s_star: f64, p_star: Option<f64>) -> Self {
        ExponentPoint { rate, value: raw.max(0.0), theta, s_star, p_star, clamped: raw < 0.0 }
    }
}

fn objective_log(w: &Dmc, log_p: &[f64], rho: f64, theta: f64, rate: f64) -> f64 {
    let mut total = LogSum::new();
    for y in 0..w.ny() {
        let mut den = LogSum::new();
        for x in 0..w.nx() {
            let l = w.log_prob(x, y);
            if l > f64::NEG_INFINITY {
                den.add(log_p[x] + theta * l);
            }
        }
        let den = den.value();
        for x in 0..w.nx() {
            let l = w.log_prob(x, y);
            if l > f64::NEG_INFINITY && log_p[x] > f64::NEG_INFINITY {
                total.add(log_p[x] + (1.0 + rho * theta) * l - rho * den);
            }
        }
    }
    rho * rate - total.value()
}

/// The objective `ρR - log Σ_x Σ_y P(x) W^{1+ρθ}(y|x) / (Σ_x' P(x') W^θ(y|x'))^ρ`
/// for any channel and input distribution.
pub fn f_objective(w: &Dmc, input: &Pmf, rho: f64, theta: f64, rate: f64) -> Result<f64> {
    if !(rho < 0.0 && rho.is_finite()) {
        return invalid(format!("rho = {rho} must be negative"));
    }
    check_theta(theta, ThetaRange::AtLeastOne)?;
    if input.len() != w.nx() {
        return invalid("input distribution does not match the channel");
    }
    let v = objective_log(w, input.log_masses(), rho, theta, rate);
    if v.is_nan() {
        return Err(Error::NumericFailure { at: rho });
    }
    Ok(v)
}

/// Binary-input channel families with closed-form exponent objectives.
pub trait BinaryExponentModel: Send + Sync {
    fn name(&self) -> &'static str;
    fn channel(&self, eps: f64) -> Result<Dmc>;
    fn capacity(&self, eps: f64) -> Result<f64>;
    /// `(1-1/s)R - log[…]` at input bias `p`: the F objective with `ρ = 1-1/s`.
    fn f_objective_s(&self, eps: f64, theta: f64, s: f64, p: f64, rate: f64) -> f64;
    /// Range of input biases searched for F, given the smallest feasible
    /// bias `p_r ≤ 1/2`.
    fn input_range(&self, p_r: f64) -> (f64, f64);
    /// The term `T(s)` in `E_sp(R) = sup_{0<s≤1} (1-1/s)R - T(s)`.
    fn sphere_packing_term(&self, eps: f64, s: f64) -> Result<f64>;
}

fn lse2(a: f64, b: f64) -> f64 {
    log_sum_exp(&[a, b])
}

pub struct BscExponents;
pub struct ZExponents;

impl BinaryExponentModel for BscExponents {
    fn name(&self) -> &'static str {
        "bsc"
    }

    fn channel(&self, eps: f64) -> Result<Dmc> {
        Dmc::bsc(eps)
    }

    fn capacity(&self, eps: f64) -> Result<f64> {
        bsc_capacity(eps)
    }

    fn f_objective_s(&self, eps: f64, theta: f64, s: f64, p: f64, rate: f64) -> f64 {
        let (l0, l1) = (eps.ln(), (-eps).ln_1p());
        let (lp, lq) = (p.ln(), (-p).ln_1p());
        let a = 1.0 + theta - theta / s;
        let r = 1.0 - 1.0 / s;
        let t1 = lse2(lq + a * l1, lp + a * l0) - r * lse2(lq + theta * l1, lp + theta * l0);
        let t2 = lse2(lq + a * l0, lp + a * l1) - r * lse2(lq + theta * l0, lp + theta * l1);
        r * rate - lse2(t1, t2)
    }

    fn input_range(&self, p_r: f64) -> (f64, f64) {
        // The objective is symmetric under p ↔ 1-p.
        (p_r, 0.5)
    }

    fn sphere_packing_term(&self, eps: f64, s: f64) -> Result<f64> {
        let lse = lse2(s * (-eps).ln_1p(), s * eps.ln());
        Ok((1.0 - 1.0 / s) * std::f64::consts::LN_2 + lse / s)
    }
}

impl BinaryExponentModel for ZExponents {
    fn name(&self) -> &'static str {
        "z"
    }

    fn channel(&self, eps: f64) -> Result<Dmc> {
        Dmc::z(eps)
    }

    fn capacity(&self, eps: f64) -> Result<f64> {
        z_capacity(eps)
    }

    fn f_objective_s(&self, eps: f64, theta: f64, s: f64, p: f64, rate: f64) -> f64 {
        let l0 = eps.ln();
        let (lp, lq) = (p.ln(), (-p).ln_1p());
        let a = 1.0 + theta - theta / s;
        let r = 1.0 - 1.0 / s;
        let u1 = lse2(lq, lp + a * l0) - r * lse2(lq, lp + theta * l0);
        let u2 = lp / s + (-eps).ln_1p();
        r * rate - lse2(u1, u2)
    }

    fn input_range(&self, p_r: f64) -> (f64, f64) {
        // Not symmetric: both halves of the unit interval are searched.
        (p_r, 1.0 - p_r)
    }

    fn sphere_packing_term(&self, eps: f64, s: f64) -> Result<f64> {
        let l0 = eps.ln();
        let (l1, inv) = ((-eps).ln_1p(), 1.0 / s);
        // For s ≤ 1 the bracket is convex in p, so the inner search is unimodal.
        let neg = |p: f64| {
            let (lp, lq) = (p.ln(), (-p).ln_1p());
            -lse2(inv * lse2(lq, lp + s * l0), inv * lp + l1)
        };
        let best = maximize_scalar(neg, 0.0, 1.0, INNER_GRID, REFINE_TOL)?;
        Ok(-best.value)
    }
}

pub struct ExponentRegistry {
    models: Vec<Box<dyn BinaryExponentModel>>,
}

impl ExponentRegistry {
    pub fn builtin() -> Self {
        ExponentRegistry { models: vec![Box::new(BscExponents), Box::new(ZExponents)] }
    }

    pub fn register(&mut self, model: Box<dyn BinaryExponentModel>) {
        self.models.retain(|m| m.name() != model.name());
        self.models.push(model);
    }

    pub fn get(&self, name: &str) -> Option<&dyn BinaryExponentModel> {
        self.models.iter().find(|m| m.name() == name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.models.iter().map(|m| m.name()).collect()
    }
}

/// Smallest `p ≤ 1/2` with `h_b(p) ≥ R + margin`, or `None` if no bias is
/// feasible.
pub fn min_feasible_bias(rate: f64) -> Option<f64> {
    let target = rate + FEASIBILITY_MARGIN;
    if target >= std::f64::consts::LN_2 {
        return None;
    }
    let h = |p: f64| binary_entropy(p).unwrap_or(f64::NAN);
    let (mut lo, mut hi) = (0.0, 0.5);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn check_rate(rate: f64, capacity: f64) -> Result<()> {
    if rate > 0.0 && rate < capacity {
        Ok(())
    } else {
        invalid(format!("rate {rate} outside (0, C) with C = {capacity}"))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        invalid(format!("eps = {eps} outside (0,1)"))
    }
}

/// Optimizes over `s` for a fixed input bias. The objective is concave in
/// ρ, hence unimodal in s, so a short grid suffices.
fn best_s(model: &dyn BinaryExponentModel, eps: f64, theta: f64, p: f64, rate: f64) -> Result<(f64, f64)> {
    let r = maximize_scalar(|s| model.f_objective_s(eps, theta, s, p, rate), S_LO, S_HI, INNER_GRID, REFINE_TOL)?;
    Ok((r.x, r.value))
}

/// `F(R, θ)`: the supremum of the closed-form objective over `s` and
/// feasible input biases, clamped at 0.
pub fn f_lower_bound(model: &dyn BinaryExponentModel, eps: f64, rate: f64, theta: f64) -> Result<ExponentPoint> {
    check_eps(eps)?;
    check_theta(theta, ThetaRange::AtLeastOne)?;
    check_rate(rate, model.capacity(eps)?)?;
    let p_r = min_feasible_bias(rate)
        .ok_or_else(|| Error::InvalidParameter(format!("no input bias has entropy above {rate}")))?;
    let (lo, hi) = model.input_range(p_r);
    let outer =
        maximize_scalar(|p| best_s(model, eps, theta, p, rate).map_or(f64::NAN, |r| r.1), lo, hi, P_GRID, REFINE_TOL)?;
    let (s_star, _) = best_s(model, eps, theta, outer.x, rate)?;
    Ok(ExponentPoint::new(rate, outer.value, Some(theta), s_star, Some(outer.x)))
}

/// Input distributions considered by [`f_lower_bound_dmc`].
pub enum InputSearch<'a> {
    /// Scan `P(X=1)` over `h_b(p) > R`; binary-input channels only.
    BinaryScan,
    /// Use exactly these distributions (those with entropy ≤ R are skipped).
    Candidates(&'a [Pmf]),
}

/// `F(R, θ)` for an arbitrary channel using the generic objective.
pub fn f_lower_bound_dmc(w: &Dmc, inputs: InputSearch<'_>, rate: f64, theta: f64) -> Result<ExponentPoint> {
    check_theta(theta, ThetaRange::AtLeastOne)?;
    check_rate(rate, w.capacity()?.capacity)?;
    let inner = |log_p: &[f64]| {
        maximize_scalar(|s| objective_log(w, log_p, 1.0 - 1.0 / s, theta, rate), S_LO, S_HI, INNER_GRID, REFINE_TOL)
    };
    match inputs {
        InputSearch::BinaryScan => {
            if w.nx() != 2 {
                return invalid("binary scan needs a binary-input channel");
            }
            let p_r = min_feasible_bias(rate)
                .ok_or_else(|| Error::InvalidParameter(format!("no input bias has entropy above {rate}")))?;
            let logs = |p: f64| [(-p).ln_1p(), p.ln()];
            let outer =
                maximize_scalar(|p| inner(&logs(p)).map_or(f64::NAN, |r| r.value), p_r, 1.0 - p_r, P_GRID, REFINE_TOL)?;
            let s = inner(&logs(outer.x))?.x;
            Ok(ExponentPoint::new(rate, outer.value, Some(theta), s, Some(outer.x)))
        }
        InputSearch::Candidates(cands) => {
            let mut best: Option<(f64, f64)> = None;
            for c in cands {
                if c.len() != w.nx() {
                    return invalid("candidate input does not match the channel");
                }
                if c.entropy() <= rate + FEASIBILITY_MARGIN {
                    continue;
                }
                let r = inner(c.log_masses())?;
                if best.is_none_or(|b| r.value > b.1) {
                    best = Some((r.x, r.value));
                }
            }
            let (s, v) =
                best.ok_or_else(|| Error::InvalidParameter("no candidate input has entropy above the rate".into()))?;
            Ok(ExponentPoint::new(rate, v, Some(theta), s, None))
        }
    }
}

/// Sphere-packing exponent `sup_{0<s≤1} (1-1/s)R - T(s)`.
pub fn sphere_packing(model: &dyn BinaryExponentModel, eps: f64, rate: f64) -> Result<ExponentPoint> {
    check_eps(eps)?;
    check_rate(rate, model.capacity(eps)?)?;
    let r = maximize_scalar(
        |s| model.sphere_packing_term(eps, s).map_or(f64::NAN, |t| (1.0 - 1.0 / s) * rate - t),
        S_LO,
        1.0,
        S_GRID,
        REFINE_TOL,
    )?;
    Ok(ExponentPoint::new(rate, r.value, None, r.x, None))
}

/// `points` rates evenly spaced strictly inside `(0, capacity)`.
pub fn rate_grid(capacity: f64, points: usize) -> Vec<f64> {
    (1..=points).map(|k| capacity * k as f64 / (points + 1) as f64).collect()
}
