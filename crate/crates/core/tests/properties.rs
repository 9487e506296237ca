use proptest::prelude::*;
use tiltbound::bounds::{
    fano_bounds, gpv_bound, gpv_bound_limit, map_error, maximize_over_alpha, oracle::brute_force_bound,
    unique_map_limit, Theta,
};
use tiltbound::channels::{code_joint, BlockCode, Dmc};
use tiltbound::codebound::{code_lower_bound, exact_code_error};
use tiltbound::prob::{JointFiniteModel, Pmf, PosteriorProfile, TIE_TOL};
use tiltbound::reliability::f_objective;

fn normalize(w: &[f64]) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

fn model_strategy() -> impl Strategy<Value = JointFiniteModel> {
    (2usize..=5, 2usize..=5).prop_flat_map(|(nx, ny)| {
        (prop::collection::vec(0.01f64..1.0, nx), prop::collection::vec(prop::collection::vec(0.001f64..1.0, ny), nx))
            .prop_map(|(prior, rows)| {
                let rows: Vec<Vec<f64>> = rows.iter().map(|r| normalize(r)).collect();
                JointFiniteModel::new(Pmf::from_probs(&normalize(&prior)).unwrap(), &rows).unwrap()
            })
    })
}

fn channel_strategy() -> impl Strategy<Value = Dmc> {
    prop::collection::vec(prop::collection::vec(0.001f64..1.0, 2), 2)
        .prop_map(|rows| Dmc::from_rows(&rows.iter().map(|r| normalize(r)).collect::<Vec<_>>()).unwrap())
}

/// Smallest log-gap between the best and second-best posterior over all y.
fn min_top_gap(m: &JointFiniteModel) -> f64 {
    (0..m.ny())
        .map(|y| {
            let p = m.posterior_profile(y).unwrap();
            p.log_values()[0] - p.log_values()[1]
        })
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tilt_is_a_pmf_that_sharpens(p in prop::collection::vec(0.001f64..1.0, 2..8), t in 1.0f64..50.0) {
        let p = Pmf::from_probs(&normalize(&p)).unwrap();
        let a = p.tilt(t).unwrap();
        let b = p.tilt(t + 1.0).unwrap();
        prop_assert!((a.masses().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let max = |q: &Pmf| q.masses().into_iter().fold(0.0, f64::max);
        prop_assert!(max(&b) >= max(&a) - 1e-15);
        prop_assert!(max(&a) >= max(&p) - 1e-15);
    }

    #[test]
    fn tilting_preserves_posterior_order(m in model_strategy(), t in 1.0f64..100.0) {
        for y in 0..m.ny() {
            let post = m.posterior(y).unwrap();
            let before = PosteriorProfile::from_pmf(&post, 0.0);
            let after = post.tilt(t).unwrap();
            let vals: Vec<f64> = before.order().iter().map(|&i| after.log_mass(i)).collect();
            prop_assert!(vals.windows(2).all(|w| w[0] >= w[1] - 1e-12));
        }
    }

    #[test]
    fn bound_never_exceeds_map_error(m in model_strategy(), t in 1.0f64..100.0, a in 0.0f64..=1.0) {
        let b = gpv_bound(&m, t, a).unwrap();
        prop_assert!(b >= 0.0);
        prop_assert!(b <= map_error(&m) + 1e-12, "bound {} > P_e {}", b, map_error(&m));
        prop_assert!(gpv_bound_limit(&m, a, true).unwrap() <= map_error(&m) + 1e-12);
    }

    #[test]
    fn bound_matches_naive_oracle(m in model_strategy(), t in 1.0f64..60.0, a in 0.0f64..=1.0) {
        let fast = gpv_bound(&m, t, a).unwrap();
        let slow = brute_force_bound(&m, t, a);
        prop_assert!((fast - slow).abs() < 1e-9, "{} vs {}", fast, slow);
    }

    #[test]
    fn limit_is_exact_without_ties(m in model_strategy(), a in 0.0f64..0.999) {
        prop_assume!(min_top_gap(&m) > 10.0 * TIE_TOL);
        let r = unique_map_limit(&m, a).unwrap();
        prop_assert!(r.map_unique);
        prop_assert!((r.value - map_error(&m)).abs() < 1e-12);
    }

    #[test]
    fn large_theta_approaches_the_limit(m in model_strategy(), a in 0.01f64..0.99) {
        prop_assume!(min_top_gap(&m) > 1e-3);
        let big = gpv_bound(&m, 2e5, a).unwrap();
        let lim = gpv_bound_limit(&m, a, true).unwrap();
        prop_assert!((big - lim).abs() < 1e-9, "{} vs {}", big, lim);
    }

    #[test]
    fn alpha_maximizer_dominates_any_alpha(m in model_strategy(), t in 1.0f64..20.0, a in 0.0f64..=1.0) {
        let best = maximize_over_alpha(&m, Theta::Finite(t)).unwrap();
        prop_assert!(best.value >= gpv_bound(&m, t, a).unwrap() - 1e-12);
        prop_assert!((gpv_bound(&m, t, best.alpha).unwrap() - best.value).abs() < 1e-12);
        let lim = maximize_over_alpha(&m, Theta::Limit).unwrap();
        prop_assert!(lim.value >= gpv_bound_limit(&m, a, true).unwrap() - 1e-12);
    }

    #[test]
    fn fano_bounds_are_valid(m in model_strategy()) {
        let f = fano_bounds(&m).unwrap();
        let pe = map_error(&m);
        prop_assert!(f.original <= pe + 1e-9, "original {} > {}", f.original, pe);
        prop_assert!(f.weakened <= pe + 1e-9, "weakened {} > {}", f.weakened, pe);
    }

    #[test]
    fn code_converse_is_sound(
        w in channel_strategy(),
        bits in prop::collection::vec(prop::collection::vec(0usize..2, 3), 1..5),
        t in 1.0f64..30.0,
        a in 0.0f64..=1.0,
    ) {
        let mut words = bits;
        words.sort();
        words.dedup();
        let code = BlockCode::new(words).unwrap();
        let b = code_lower_bound(&code, &w, t, a).unwrap();
        prop_assert!(b <= exact_code_error(&code, &w).unwrap() + 1e-12);
        let g = gpv_bound(&code_joint(&code, &w).unwrap(), t, a).unwrap();
        prop_assert!((b - g).abs() < 1e-12);
    }

    #[test]
    fn capacity_brackets(w in channel_strategy()) {
        let c = w.capacity().unwrap();
        let iu = w.joint(&Pmf::uniform(2).unwrap()).unwrap().mutual_information();
        prop_assert!(c.capacity >= iu - 1e-10);
        prop_assert!(c.capacity <= std::f64::consts::LN_2 + 1e-12);
        let at_opt = w.joint(&c.input).unwrap().mutual_information();
        prop_assert!((at_opt - c.capacity).abs() < 1e-8);
    }

    #[test]
    fn f_objective_is_concave_in_rho(w in channel_strategy(), p in 0.05f64..0.95, t in 1.0f64..20.0,
                                      r1 in -20.0f64..-0.01, r2 in -20.0f64..-0.01, rate in 0.0f64..0.7) {
        let input = Pmf::bernoulli(p).unwrap();
        let f = |r: f64| f_objective(&w, &input, r, t, rate).unwrap();
        let mid = f(0.5 * (r1 + r2));
        prop_assert!(mid >= 0.5 * (f(r1) + f(r2)) - 1e-9 * (1.0 + mid.abs()));
        prop_assert!(f(-1e-9).abs() < 1e-6);
    }
}

#[test]
fn capacity_of_nearly_useless_channel_converges() {
    let rows = [
        [(-0.11762552153363484f64).exp(), (-2.198485584301407f64).exp()],
        [(-0.11880372582129774f64).exp(), (-2.1890963455937746f64).exp()],
    ];
    let w = Dmc::from_rows(&rows.iter().map(|r| normalize(r)).collect::<Vec<_>>()).unwrap();
    let c = w.capacity().unwrap();
    let iu = w.joint(&Pmf::uniform(2).unwrap()).unwrap().mutual_information();
    assert!(c.capacity >= iu - 1e-10 && c.capacity < 1e-4);
}
