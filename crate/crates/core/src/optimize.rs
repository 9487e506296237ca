//! Deterministic scalar maximization: a uniform coarse grid followed by
//! golden-section refinement around the best grid point.

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMax {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `f` on `[lo, hi]`.
///
/// Only the grid stage is global; refinement assumes `f` is unimodal within
/// one grid cell of the best grid point. Among equal grid values the lowest
/// abscissa wins, and the refined point replaces the grid point only if it
/// is strictly better.
pub fn maximize_scalar<F>(mut f: F, lo: f64, hi: f64, coarse: usize, tol: f64) -> Result<ScalarMax>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || coarse < 2 || !(tol > 0.0) {
        return invalid(format!("bad search setup [{lo}, {hi}] with {coarse} points"));
    }
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_nan() {
            Err(Error::NumericFailure { at: x })
        } else {
            Ok(v)
        }
    };
    let step = (hi - lo) / (coarse - 1) as f64;
    let grid = |i: usize| if i == coarse - 1 { hi } else { lo + step * i as f64 };
    let mut best_i = 0;
    let mut best = ScalarMax { x: lo, value: eval(lo)? };
    for i in 1..coarse {
        let x = grid(i);
        let v = eval(x)?;
        if v > best.value {
            best = ScalarMax { x, value: v };
            best_i = i;
        }
    }

    let mut a = grid(best_i.saturating_sub(1));
    let mut b = grid((best_i + 1).min(coarse - 1));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    // TODO: stop early once the bracket values stop changing.
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    let (x, v) = if fc >= fd { (c, fc) } else { (d, fd) };
    if v > best.value {
        best = ScalarMax { x, value: v };
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_peak() {
        let r = maximize_scalar(|x| -(x - 0.3).powi(2), 0.0, 1.0, 16, 1e-10).unwrap();
        assert!((r.x - 0.3).abs() < 1e-7);
        assert!(r.value <= 0.0 && r.value > -1e-13);
    }

    #[test]
    fn monotone_functions_stop_at_the_edge() {
        let up = maximize_scalar(|x| x, 0.0, 2.0, 8, 1e-10).unwrap();
        assert_eq!(up, ScalarMax { x: 2.0, value: 2.0 });
        let down = maximize_scalar(|x| -x, 0.0, 2.0, 8, 1e-10).unwrap();
        assert_eq!(down, ScalarMax { x: 0.0, value: 0.0 });
    }

    #[test]
    fn equal_peaks_prefer_the_lower_one() {
        let f = |x: f64| -((x - 0.25) * (x - 0.75)).powi(2);
        let r = maximize_scalar(f, 0.0, 1.0, 5, 1e-10).unwrap();
        assert!((r.x - 0.25).abs() < 1e-6);
    }

    #[test]
    fn nan_is_reported() {
        let r = maximize_scalar(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, 11, 1e-9);
        assert!(matches!(r, Err(Error::NumericFailure { .. })));
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (5.0 * x).sin() * x;
        let a = maximize_scalar(f, 0.0, 3.0, 64, 1e-10).unwrap();
        let b = maximize_scalar(f, 0.0, 3.0, 64, 1e-10).unwrap();
        assert_eq!(a.x.to_bits(), b.x.to_bits());
    }
}
