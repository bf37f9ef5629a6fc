//! Property-based invariants over randomized parameters.

use proptest::prelude::*;

use cgmy_core::dirichlet;
use cgmy_core::ggc;
use cgmy_core::model::CgmyParams;
use cgmy_core::stable;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_shapes_reassembles_tau(tau in 0.01f64..50.0) {
        let (j, tau_j) = dirichlet::split_shapes(tau).unwrap();
        prop_assert!(j >= 1);
        prop_assert!(tau_j > 0.0 && tau_j <= 1.0);
        prop_assert!((j as f64 * tau_j - tau).abs() < 1e-10 * tau.max(1.0));
    }

    #[test]
    fn zolotarev_a_positive_and_finite(
        u in 0.0f64..std::f64::consts::PI - 0.01,
        y in 0.05f64..0.95,
    ) {
        let a = stable::zolotarev_a(u, y).unwrap();
        prop_assert!(a.is_finite() && a > 0.0);
    }

    #[test]
    fn l_min_decreasing_in_eps(
        c in 0.01f64..1.0,
        y in 0.1f64..1.9,
        dt in 0.01f64..1.0,
        eps in 1e-6f64..1e-2,
    ) {
        let p = CgmyParams::new(c, 2.0, 3.5, y).unwrap();
        let tight = ggc::l_min(&p, dt, eps).unwrap();
        let loose = ggc::l_min(&p, dt, 2.0 * eps).unwrap();
        prop_assert!(tight >= loose, "l_min not decreasing: {tight} < {loose}");
    }

    #[test]
    fn error_bound_decreasing_in_l(
        c in 0.01f64..1.0,
        y in 0.1f64..1.9,
        l in 1.0f64..1e6,
    ) {
        let p = CgmyParams::new(c, 2.0, 3.5, y).unwrap();
        let coarse = ggc::error_second_moment_bound(&p, 0.25, l).unwrap();
        let fine = ggc::error_second_moment_bound(&p, 0.25, 2.0 * l).unwrap();
        prop_assert!(fine < coarse);
    }

    #[test]
    fn tau_scales_with_dt_and_l(
        c in 0.01f64..1.0,
        y in 0.1f64..1.9,
        dt in 0.01f64..1.0,
        l in 1.0f64..1e6,
    ) {
        let p = CgmyParams::new(c, 2.0, 3.5, y).unwrap();
        let base = ggc::compute_tau(&p, dt, l).unwrap();
        let double_dt = ggc::compute_tau(&p, 2.0 * dt, l).unwrap();
        prop_assert!((double_dt - 2.0 * base).abs() < 1e-9 * base.max(1.0));
        let double_l = ggc::compute_tau(&p, dt, 2.0 * l).unwrap();
        let expect = base * 2f64.powf(y / 2.0);
        prop_assert!((double_l - expect).abs() < 1e-9 * expect.max(1.0));
    }

    #[test]
    fn char_fn_modulus_bounded_by_one(
        c in 0.01f64..0.5,
        y in 0.1f64..0.95,
        u in -10.0f64..10.0,
    ) {
        let p = CgmyParams::new(c, 2.0, 3.5, y).unwrap();
        prop_assert!(p.char_fn(0.25, u).unwrap().norm() <= 1.0 + 1e-12);
    }
}
