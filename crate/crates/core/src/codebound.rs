//! Converse bound for block codes with equiprobable messages, checked against
//! exhaustive MAP decoding.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{check_alpha, EVENT_LOG_TOL};
use crate::channels::{BlockCode, Dmc};
use crate::error::{invalid, Result};
use crate::prob::{check_theta, LogSum, ThetaRange, TIE_TOL};

fn argmax_lowest(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &l) in v.iter().enumerate().skip(1) {
        if l > v[best] {
            best = i;
        }
    }
    best
}

/// Exact error probability of the MAP (= ML) decoder, by enumerating every
/// output sequence. Ties go to the lowest codeword index, which does not
/// change the error probability.
pub fn exact_code_error(code: &BlockCode, w: &Dmc) -> Result<f64> {
    code.check_against(w)?;
    let ny = code.outputs(w)?;
    let mut buf = Vec::with_capacity(code.size());
    let mut err = 0.0;
    for y in 0..ny {
        code.log_likelihoods(w, y, &mut buf);
        let g = argmax_lowest(&buf);
        for (m, &l) in buf.iter().enumerate() {
            if m != g {
                err += l.exp();
            }
        }
    }
    Ok(err / code.size() as f64)
}

/// `(1 - α) · P[ j^(θ)(X^n; Y^n) ≤ log(Mα) ]` with the tilted information
/// density of the code's own (uniform) input distribution.
pub fn code_lower_bound(code: &BlockCode, w: &Dmc, theta: f64, alpha: f64) -> Result<f64> {
    check_theta(theta, ThetaRange::AtLeastOne)?;
    check_alpha(alpha)?;
    code.check_against(w)?;
    let ny = code.outputs(w)?;
    let m = code.size() as f64;
    let threshold = m.ln() + alpha.ln() + EVENT_LOG_TOL;
    let mut buf = Vec::with_capacity(code.size());
    let mut event = 0.0;
    for y in 0..ny {
        code.log_likelihoods(w, y, &mut buf);
        let mut den = LogSum::new();
        for &l in &buf {
            if l > f64::NEG_INFINITY {
                den.add(theta * l - m.ln());
            }
        }
        let den = den.value();
        if den == f64::NEG_INFINITY {
            continue;
        }
        for &l in &buf {
            if l > f64::NEG_INFINITY && theta * l - den <= threshold {
                event += l.exp();
            }
        }
    }
    Ok((1.0 - alpha) * event / m)
}

/// True when every output sequence of positive probability has a unique
/// most likely codeword.
pub fn ml_unique(code: &BlockCode, w: &Dmc) -> Result<bool> {
    code.check_against(w)?;
    let ny = code.outputs(w)?;
    let mut buf = Vec::with_capacity(code.size());
    for y in 0..ny {
        code.log_likelihoods(w, y, &mut buf);
        buf.sort_by(|a, b| b.total_cmp(a));
        if buf[0] == f64::NEG_INFINITY {
            continue;
        }
        if buf.len() > 1 && buf[0] - buf[1] <= TIE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Simulated error rate with a 95% Wilson interval, for codes too long to
/// enumerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub samples: u64,
    pub errors: u64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn monte_carlo_code_error(code: &BlockCode, w: &Dmc, samples: u64, seed: u64) -> Result<McEstimate> {
    code.check_against(w)?;
    if samples == 0 {
        return invalid("need at least one sample");
    }
    let rows: Vec<WeightedIndex<f64>> =
        w.rows().into_iter().map(|r| WeightedIndex::new(r).expect("channel rows are valid distributions")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ys = vec![0; code.len()];
    let mut errors = 0u64;
    for _ in 0..samples {
        let sent = rng.random_range(0..code.size());
        for (i, &x) in code.words()[sent].iter().enumerate() {
            ys[i] = rows[x].sample(&mut rng);
        }
        let ll: Vec<f64> =
            code.words().iter().map(|c| c.iter().zip(&ys).map(|(&x, &y)| w.log_prob(x, y)).sum()).collect();
        if argmax_lowest(&ll) != sent {
            errors += 1;
        }
    }
    let n = samples as f64;
    let p = errors as f64 / n;
    let z = 1.959_963_984_540_054;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    Ok(McEstimate {
        samples,
        errors,
        estimate: p,
        lower: if errors == 0 { 0.0 } else { (centre - half).max(0.0) },
        upper: if errors == samples { 1.0 } else { (centre + half).min(1.0) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{gpv_bound, gpv_bound_limit};
    use crate::channels::code_joint;

    #[test]
    fn repetition_code_error() {
        let w = Dmc::bsc(0.01).unwrap();
        let pe = exact_code_error(&BlockCode::repetition(3).unwrap(), &w).unwrap();
        // Majority vote over 3 uses fails on two or three flips: 3ε²(1-ε) + ε³.
        assert!((pe - (3.0 * 1e-4 * 0.99 + 1e-6)).abs() < 1e-15);
    }

    #[test]
    fn even_length_repetition_has_ties() {
        let w = Dmc::bsc(0.1).unwrap();
        assert!(!ml_unique(&BlockCode::repetition(2).unwrap(), &w).unwrap());
        assert!(ml_unique(&BlockCode::repetition(3).unwrap(), &w).unwrap());
    }

    #[test]
    fn bound_matches_generic_evaluator() {
        let w = Dmc::z(0.3).unwrap();
        let code = BlockCode::new(vec![vec![0, 0, 1], vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        let m = code_joint(&code, &w).unwrap();
        for theta in [1.0, 2.0, 10.0] {
            for alpha in [0.0, 0.1, 0.35, 0.6, 1.0] {
                let a = code_lower_bound(&code, &w, theta, alpha).unwrap();
                let b = gpv_bound(&m, theta, alpha).unwrap();
                assert!((a - b).abs() < 1e-12, "θ={theta} α={alpha}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn limit_recovers_error_when_ml_is_unique() {
        let w = Dmc::bsc(0.1).unwrap();
        let code = BlockCode::repetition(3).unwrap();
        assert!(ml_unique(&code, &w).unwrap());
        let m = code_joint(&code, &w).unwrap();
        let lim = gpv_bound_limit(&m, 0.5, false).unwrap();
        assert!((lim - exact_code_error(&code, &w).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_interval_covers_truth() {
        let w = Dmc::bsc(0.2).unwrap();
        let code = BlockCode::repetition(3).unwrap();
        let exact = exact_code_error(&code, &w).unwrap();
        let mc = monte_carlo_code_error(&code, &w, 20_000, 7).unwrap();
        assert!(mc.lower <= exact && exact <= mc.upper, "{mc:?} vs {exact}");
        assert_eq!(mc, monte_carlo_code_error(&code, &w, 20_000, 7).unwrap());
    }
}
