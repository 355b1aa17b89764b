use proptest::prelude::*;

use propertime::analysis::scaling_exponent;
use propertime::closed_forms::{
    ground_state_phase_full, ground_state_phase_series, ground_state_visibility_full,
    ground_state_visibility_series, sods_thermal_first_order, squeezed_offdiag_exact,
    thermal_low_t_offdiag, thermal_offdiag_exact, visibility_squeezed_approx,
    visibility_squeezed_exact, vsods,
};
use propertime::principal;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn visibilities_are_bounded(r in 0.0f64..3.0, theta in 0.0f64..10.0, eps in 0.0f64..0.9, t in 0.0f64..100.0, nbar in 0.0f64..50.0) {
        let v = visibility_squeezed_exact(r, theta);
        prop_assert!(v > 0.0 && v <= 1.0 + 1e-15);
        let g = ground_state_visibility_full(eps, t);
        prop_assert!(g > 0.0 && g <= 1.0 + 1e-12);
        let th = thermal_offdiag_exact(nbar, eps * t / 4.0 % 1.5, 0.0).norm();
        prop_assert!(th > 0.0 && th <= 1.0 + 1e-15);
    }

    #[test]
    fn no_entangling_parameter_means_full_visibility(r in 0.0f64..3.0, t in 0.0f64..100.0, nbar in 0.0f64..50.0) {
        prop_assert_eq!(visibility_squeezed_exact(r, 0.0), 1.0);
        prop_assert_eq!(visibility_squeezed_exact(0.0, t), 1.0);
        prop_assert!((ground_state_visibility_full(0.0, t) - 1.0).abs() < 1e-15);
        prop_assert_eq!(thermal_offdiag_exact(nbar, 0.0, 0.0).norm(), 1.0);
    }

    #[test]
    fn vacuum_is_the_zero_temperature_limit(eps_m in 1e-20f64..1e-3) {
        let a = sods_thermal_first_order(0.0, eps_m).fractional_shift.unwrap();
        let b = vsods(eps_m).fractional_shift.unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn exact_phases_are_continuous(r in 0.0f64..2.0, nbar in 0.0f64..20.0) {
        let n = 2000;
        let mut prev_sq = squeezed_offdiag_exact(r, 0.0, 0.0).arg();
        let mut prev_th = thermal_offdiag_exact(nbar, 0.0, 0.0).arg();
        for i in 1..=n {
            let x = 3.0 * i as f64 / n as f64;
            let sq = squeezed_offdiag_exact(r, x, 0.0).arg();
            let th = thermal_offdiag_exact(nbar, x / 2.0, 0.0).arg();
            prop_assert!(principal(sq - prev_sq).abs() < 0.5);
            prop_assert!((th - prev_th).abs() < 0.5, "jump at {x}");
            prev_sq = sq;
            prev_th = th;
        }
    }
}

fn exponent(metric: impl Fn(f64) -> f64, e1: f64, e2: f64) -> f64 {
    scaling_exponent(e1, metric(e1), e2, metric(e2)).unwrap()
}

#[test]
fn low_temperature_form_is_first_order_accurate() {
    // phase error of the linearized arctangent is cubic in ε
    let k = exponent(
        |e| (thermal_low_t_offdiag(2.0, e, 0.0).arg() - thermal_offdiag_exact(2.0, e, 0.0).arg()).abs(),
        1e-3,
        1e-2,
    );
    assert!((k - 3.0).abs() < 0.6, "{k}");
}

#[test]
fn ground_state_series_are_second_order_accurate() {
    let t = 7.3;
    let kp = exponent(
        |e| (ground_state_phase_series(e, t) - ground_state_phase_full(e, t)).abs(),
        1e-3,
        1e-2,
    );
    assert!((kp - 3.0).abs() < 0.6, "{kp}");
    let kv = exponent(
        |e| (ground_state_visibility_series(e, t) - ground_state_visibility_full(e, t)).abs(),
        1e-3,
        1e-2,
    );
    assert!((kv - 3.0).abs() < 0.6, "{kv}");
}

#[test]
fn squeezed_approximation_error_is_quartic_in_theta() {
    let r = 0.5;
    let k = exponent(
        |th| (visibility_squeezed_approx(r, th).value - visibility_squeezed_exact(r, th)).abs(),
        1e-3,
        1e-2,
    );
    assert!((k - 4.0).abs() < 0.8, "{k}");
}
