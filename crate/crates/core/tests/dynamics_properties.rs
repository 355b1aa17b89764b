use proptest::prelude::*;

use propertime::dynamics::{
    ClockParams, ClockSuperposition, CompositeState, Frame, Propagator, Variant,
};
use propertime::fock::{general_squeezed_vacuum, CVector, FockDim, MotionalState};
use propertime::validation::min_branch_fidelity;
use propertime::C64;

fn dim(n: usize) -> FockDim {
    FockDim::new(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parameter_identity(eps_c in 1e-12f64..0.5, ratio in 1.0f64..1e12) {
        let p = ClockParams::with_ratio(eps_c, ratio).unwrap();
        let lhs = p.eps_m * p.omega_c;
        let rhs = p.eps_c * p.omega;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()));
    }

    #[test]
    fn physical_params_satisfy_identity(omega_c in 1e14f64..1e16, omega in 1e6f64..1e8, mass in 1e-27f64..1e-24) {
        let p = ClockParams::physical(omega_c, omega, mass).unwrap();
        prop_assert!(p.validate().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ground_branch_ignores_coupling(eps in 0.0f64..0.3, t in 0.0f64..40.0) {
        let d = dim(128);
        let psi = general_squeezed_vacuum(0.7, 0.0, d).unwrap().amplitudes;
        let a = Propagator::new(&ClockParams::with_ratio(eps, 10.0).unwrap(), d, Variant::Oracle).unwrap();
        let b = Propagator::new(&ClockParams::with_ratio(0.0, 10.0).unwrap(), d, Variant::ExactDecomposition).unwrap();
        let diff = a.apply_ground(t, &psi).unwrap() - b.apply_ground(t, &psi).unwrap();
        prop_assert!(diff.norm() < 1e-12);
    }

    #[test]
    fn purity_matches_visibility(eps in 0.0f64..0.3, t in 0.0f64..30.0, r in 0.0f64..0.8) {
        let d = dim(128);
        let p = ClockParams::with_ratio(eps, 10.0).unwrap();
        let prop = Propagator::new(&p, d, Variant::ExactDecomposition).unwrap();
        let psi = general_squeezed_vacuum(r, 0.0, d).unwrap().amplitudes;
        let red = prop.ramsey_point(ClockSuperposition::balanced(), &psi, t, Frame::Lab).unwrap();
        prop_assert!((red.purity() - (1.0 + red.visibility.powi(2)) / 2.0).abs() < 1e-12);
        prop_assert!((red.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lab_and_rotating_frames_differ_by_clock_phase(t in 0.0f64..20.0) {
        let d = dim(16);
        let p = ClockParams::with_ratio(0.05, 123.0).unwrap();
        let prop = Propagator::new(&p, d, Variant::Oracle).unwrap();
        let vac = MotionalState::vacuum(d).amplitudes;
        let lab = prop.ramsey_point(ClockSuperposition::balanced(), &vac, t, Frame::Lab).unwrap();
        let rot = prop.ramsey_point(ClockSuperposition::balanced(), &vac, t, Frame::ClockRotating).unwrap();
        let expected = rot.rho_eg * C64::from_polar(1.0, -p.clock_phase_mod(t));
        prop_assert!((lab.rho_eg - expected).norm() < 1e-12);
    }
}

#[test]
fn oracle_equivalence_on_a_smaller_grid() {
    let d = dim(128);
    let states = vec![
        MotionalState::vacuum(d).amplitudes,
        MotionalState::fock(5, d).unwrap().amplitudes,
        general_squeezed_vacuum(1.0, 0.0, d).unwrap().amplitudes,
    ];
    let grid: Vec<f64> = (0..8).map(|i| 50.0 * i as f64 / 7.0).collect();
    for &eps in &[1e-3, 1e-1] {
        let p = ClockParams::with_ratio(eps, 1e3).unwrap();
        let oracle = Propagator::new(&p, d, Variant::Oracle).unwrap();
        let exact = Propagator::new(&p, d, Variant::ExactDecomposition).unwrap();
        let f = min_branch_fidelity(&oracle, &exact, &states, &grid).unwrap();
        assert!(f >= 1.0 - 1e-9, "eps={eps}: {f}");
    }
}

#[test]
fn flipped_squeezer_is_caught() {
    let d = dim(64);
    let p = ClockParams::with_ratio(0.1, 1e3).unwrap();
    let oracle = Propagator::new(&p, d, Variant::Oracle).unwrap();
    let bad = Propagator::exact_with_zeta(&p, d, -p.zeta()).unwrap();
    let vac = vec![MotionalState::vacuum(d).amplitudes];
    let f = min_branch_fidelity(&oracle, &bad, &vac, &[0.0, 0.8, 1.6]).unwrap();
    assert!(f < 1.0 - 1e-4, "{f}");
}

fn perturbative_error(eps: f64) -> f64 {
    let d = dim(64);
    let p = ClockParams::with_ratio(eps, 10.0).unwrap();
    let exact = Propagator::new(&p, d, Variant::ExactDecomposition).unwrap();
    let pert = Propagator::new(&p, d, Variant::Perturbative).unwrap();
    let psi = general_squeezed_vacuum(0.5, 0.0, d).unwrap().amplitudes;
    [0.5, 1.3, 2.9]
        .iter()
        .map(|&t| (exact.apply_excited(t, &psi).unwrap() - pert.apply_excited(t, &psi).unwrap()).norm())
        .fold(0.0, f64::max)
}

#[test]
fn perturbative_error_is_second_order() {
    let ratio = perturbative_error(1e-2) / perturbative_error(1e-3);
    assert!((80.0..=120.0).contains(&ratio), "{ratio}");
}

#[test]
fn composite_state_norm_is_conserved() {
    let d = dim(128);
    let p = ClockParams::with_ratio(0.1, 10.0).unwrap();
    let prop = Propagator::new(&p, d, Variant::Oracle).unwrap();
    let psi: CVector = general_squeezed_vacuum(1.0, 0.3, d).unwrap().amplitudes;
    let s = CompositeState::balanced(&psi, Frame::Lab).unwrap();
    let out = prop.evolve(&s, 17.0).unwrap();
    assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
}
