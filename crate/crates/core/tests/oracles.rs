//! Closed forms and shortcuts checked against slow, independent
//! computations.

use tiltbound::bounds::{
    awgn_bound, bec_bound, gpv_bound, map_error, maximize_over_alpha, oracle::brute_force_bound, unique_map_limit,
    Theta,
};
use tiltbound::channels::{bsc_capacity, information_density, j_theta, z_capacity, Dmc};
use tiltbound::prob::Pmf;
use tiltbound::reliability::{sphere_packing, BscExponents, ZExponents};

fn alpha_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

#[test]
fn bec_closed_form_matches_enumeration() {
    for eps in [0.1, 0.5, 0.9] {
        for p in [0.1, 0.25, 0.4] {
            let m = Dmc::bec(eps).unwrap().joint(&Pmf::bernoulli(p).unwrap()).unwrap();
            for theta in [1.0, 2.0, 10.0] {
                for a in alpha_grid(21) {
                    let closed = bec_bound(eps, p, theta, a).unwrap();
                    let brute = brute_force_bound(&m, theta, a);
                    assert!((closed - brute).abs() < 1e-9, "ε={eps} p={p} θ={theta} α={a}: {closed} vs {brute}");
                }
            }
            let best = maximize_over_alpha(&m, Theta::Finite(1.0)).unwrap();
            assert!((best.alpha - (1.0 - p)).abs() < 1e-12);
            assert!((best.value - eps * p).abs() < 1e-12);
        }
    }
}

#[test]
fn repeated_bec_error_and_exactness() {
    let eps = 0.3;
    for n in 2..=4 {
        let w = Dmc::bec(eps).unwrap().product(n).unwrap();
        for p in [0.1, 0.3] {
            let m = w.joint(&Pmf::bernoulli(p).unwrap().power(n).unwrap()).unwrap();
            let expect = 1.0 - (1.0 - eps * p).powi(n as i32);
            assert!((map_error(&m) - expect).abs() < 1e-12);
            let lim = unique_map_limit(&m, 0.5).unwrap();
            assert!(lim.map_unique);
            assert!((lim.value - expect).abs() < 1e-12);
        }
        // Equiprobable inputs: tilting changes nothing.
        let m = w.joint(&Pmf::uniform(2).unwrap().power(n).unwrap()).unwrap();
        for a in alpha_grid(101) {
            let base = gpv_bound(&m, 1.0, a).unwrap();
            for theta in [2.0, 10.0, 100.0] {
                assert!((gpv_bound(&m, theta, a).unwrap() - base).abs() < 1e-12);
            }
        }
    }
}

/// `(1-α) P[tilted posterior of the sent symbol ≤ α]` for ±1 over Gaussian
/// noise, by locating the decision threshold with bisection and integrating
/// the density with Simpson's rule.
fn awgn_quadrature(sigma: f64, theta: f64, alpha: f64) -> f64 {
    if alpha == 0.0 || alpha == 1.0 {
        return 0.0;
    }
    let tilted = |y: f64| {
        let p: f64 = 1.0 / (1.0 + (-2.0 * y / (sigma * sigma)).exp());
        let (a, b) = (p.powf(theta), (1.0 - p).powf(theta));
        a / (a + b)
    };
    let (lo, hi) = (-10.0 * sigma - 1.0, 10.0 * sigma + 1.0);
    let cut = if tilted(hi) <= alpha {
        hi
    } else if tilted(lo) > alpha {
        return 0.0;
    } else {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if tilted(mid) <= alpha {
                a = mid;
            } else {
                b = mid;
            }
        }
        a
    };
    let density =
        |y: f64| (-(y - 1.0).powi(2) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let n = 20_000;
    let h = (cut - lo) / n as f64;
    let mut s = density(lo) + density(cut);
    for k in 1..n {
        s += density(lo + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    (1.0 - alpha) * s * h / 3.0
}

#[test]
fn awgn_closed_form_matches_quadrature() {
    let sigma = 0.429858;
    for theta in [1.0, 10.0, 100.0] {
        for a in alpha_grid(21) {
            let closed = awgn_bound(sigma, theta, a).unwrap();
            let quad = awgn_quadrature(sigma, theta, a);
            assert!((closed - quad).abs() < 1e-8, "θ={theta} α={a}: {closed} vs {quad}");
        }
    }
    assert!((awgn_bound(sigma, 10.0, 0.5).unwrap() - 0.005).abs() < 1e-6);
}

#[test]
fn row_symmetric_tilt_is_a_channel_density() {
    let w = Dmc::ternary(0.27, 0.33).unwrap();
    assert!(w.is_row_symmetric());
    let u = Pmf::uniform(3).unwrap();
    for theta in [1.0, 2.5, 20.0] {
        let wt = w.tilted(theta).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let j = j_theta(&u, &w, theta, x, y).unwrap();
                let i = information_density(&u, &wt, x, y).unwrap();
                assert!((i - j).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn closed_form_capacities_match_iteration() {
    for eps in [0.01, 0.1, 0.3] {
        assert!((bsc_capacity(eps).unwrap() - Dmc::bsc(eps).unwrap().capacity().unwrap().capacity).abs() < 1e-8);
        assert!((z_capacity(eps).unwrap() - Dmc::z(eps).unwrap().capacity().unwrap().capacity).abs() < 1e-8);
    }
}

#[test]
fn sphere_packing_endpoints() {
    let eps: f64 = 0.01;
    // At zero rate the optimum runs to s → 0, where the objective tends to
    // -½ log(4ε(1-ε)).
    let zero_rate = -0.5 * (4.0 * eps * (1.0 - eps)).ln();
    let e = sphere_packing(&BscExponents, eps, 1e-6).unwrap();
    assert!((e.value - zero_rate).abs() < 5e-3, "{e:?} vs {zero_rate}");
    let c = bsc_capacity(eps).unwrap();
    assert!(sphere_packing(&BscExponents, eps, c * 0.999).unwrap().value < 1e-5);
    let cz = z_capacity(eps).unwrap();
    assert!(sphere_packing(&ZExponents, eps, cz * 0.999).unwrap().value < 1e-5);
}
