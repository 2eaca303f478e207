//! Property suites over seeded random instances: witness replay, depth
//! monotonicity, equivariance, approx/exact domination, the k* lower
//! bound, and the equivariance-pair identity.

use proptest::prelude::*;
use regdepth_core::breakdown::{attack_nullspace_pair, bounds_report, KStarMode};
use regdepth_core::sim::gen_std_normal;
use regdepth_core::{
    fit_through_points, k_star_exact, rdepth_approx, rdepth_exact, rdepth_sweep_p2,
    replay_witness, residuals, Dataset, Fit,
};
use regdepth_core::rng::SplitMix64;

fn random_fit(seed: u64, p: usize) -> Fit {
    let mut rng = SplitMix64::new(seed);
    Fit::new((0..p).map(|_| 2.0 * rng.next_normal()).collect()).unwrap()
}

fn shift_vector(seed: u64, p: usize) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed ^ 0xB0B);
    (0..p).map(|_| 3.0 * rng.next_normal()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fit_interpolates_its_defining_points(seed in any::<u64>(), p in 2usize..=5, extra in 0usize..8) {
        let n = p + extra;
        let d = gen_std_normal(p, n, seed).unwrap();
        let idx: Vec<usize> = (0..p).collect();
        let f = fit_through_points(&d, &idx).unwrap();
        let r = residuals(&d, &f).unwrap();
        for &i in &idx {
            let tol = 1e-9 * (1.0 + d.y(i).abs());
            prop_assert!(r[i].abs() <= tol.max(1e-9 * f.norm() * (1.0 + d.x_norm(i))),
                "residual {} at {i}", r[i]);
        }
    }

    #[test]
    fn witness_replay_matches_count(seed in any::<u64>(), p in 2usize..=3, extra in 0usize..8) {
        let n = p + 2 + extra;
        let d = gen_std_normal(p, n, seed).unwrap();
        let f = random_fit(seed, p);
        let w = rdepth_exact(&d, &f).unwrap();
        prop_assert_eq!(replay_witness(&d, &f, &w).unwrap(), w.count());
        let wa = rdepth_approx(&d, &f, 6, seed).unwrap();
        prop_assert_eq!(replay_witness(&d, &f, &wa).unwrap(), wa.count());
    }

    #[test]
    fn depth_monotone_under_contamination(seed in any::<u64>(), p in 2usize..=3, m in 1usize..5) {
        let n = p + 5;
        let d = gen_std_normal(p, n, seed).unwrap();
        let f = random_fit(seed, p);
        let base = rdepth_exact(&d, &f).unwrap().count();
        let mut rng = SplitMix64::new(seed ^ 0xADD);
        let extra: Vec<(Vec<f64>, f64)> = (0..m)
            .map(|_| ((0..p - 1).map(|_| 5.0 * rng.next_normal()).collect(), 5.0 * rng.next_normal()))
            .collect();
        let grown = d.with_added_points(&extra, "grown").unwrap();
        prop_assert!(rdepth_exact(&grown, &f).unwrap().count() >= base);
    }

    #[test]
    fn depth_count_is_regression_equivariant(seed in any::<u64>(), p in 2usize..=3) {
        let n = p + 6;
        let d = gen_std_normal(p, n, seed).unwrap();
        let f = random_fit(seed, p);
        let b = shift_vector(seed, p);
        let shifted = d.regression_shifted(&b).unwrap();
        let fs = f.shifted(&b).unwrap();
        prop_assert_eq!(
            rdepth_exact(&d, &f).unwrap().count(),
            rdepth_exact(&shifted, &fs).unwrap().count()
        );
    }

    #[test]
    fn approx_dominates_exact(seed in any::<u64>(), p in 2usize..=3, n_dirs in 1usize..24) {
        let n = p + 6;
        let d = gen_std_normal(p, n, seed).unwrap();
        let f = random_fit(seed, p);
        let exact = rdepth_exact(&d, &f).unwrap().count();
        let approx = rdepth_approx(&d, &f, n_dirs, seed ^ 1).unwrap().count();
        prop_assert!(approx >= exact, "approx {approx} < exact {exact}");
    }

    #[test]
    fn sweep_agrees_with_exact_for_p2(seed in any::<u64>(), extra in 0usize..20) {
        let d = gen_std_normal(2, 3 + extra, seed).unwrap();
        let f = random_fit(seed, 2);
        prop_assert_eq!(
            rdepth_sweep_p2(&d, &f).unwrap().count(),
            rdepth_exact(&d, &f).unwrap().count()
        );
    }

    #[test]
    fn k_star_meets_ham_sandwich_bound(seed in any::<u64>(), p in 2usize..=3, extra in 0usize..6) {
        let n = p + 4 + extra;
        let d = gen_std_normal(p, n, seed).unwrap();
        let r = k_star_exact(&d).unwrap();
        prop_assume!(r.igp == Some(true));
        prop_assert!(r.k_star >= n.div_ceil(p + 1));
        prop_assert!(r.k_star <= n);
    }

    #[test]
    fn bounds_are_invariant_under_regression_shift(seed in any::<u64>(), p in 2usize..=3) {
        let n = p + 6;
        let d = gen_std_normal(p, n, seed).unwrap();
        let b = shift_vector(seed, p);
        let shifted = d.regression_shifted(&b).unwrap();
        prop_assert_eq!(
            bounds_report(&d, KStarMode::Exact).unwrap(),
            bounds_report(&shifted, KStarMode::Exact).unwrap()
        );
    }

    #[test]
    fn equivariance_pair_separates_by_lambda(seed in any::<u64>(), lambda in 1.0f64..50.0) {
        let d = gen_std_normal(2, 5, seed).unwrap();
        let pair = attack_nullspace_pair(&d, lambda).unwrap();
        let t1 = k_star_exact(&pair.first).unwrap().t_star;
        let t2 = k_star_exact(&pair.second).unwrap().t_star;
        let dist: f64 = t1
            .beta()
            .iter()
            .zip(t2.beta())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        prop_assert!(
            (dist - lambda).abs() <= 1e-6 * (1.0 + lambda),
            "distance {dist} vs lambda {lambda}"
        );
    }
}
