use proptest::prelude::*;

use propertime::closed_forms::qsods_success_probability;
use propertime::dynamics::{ClockParams, Propagator, Variant};
use propertime::fock::FockDim;
use propertime::protocols::{
    conditional_point, entanglement_witness, run_qsods_protocol, run_ramsey,
    state_dependent_displacement, MotionalPrep, Projector, QsodsConfig, RamseyConfig,
};
use propertime::report::{protocol_csv, to_json, PROTOCOL_COLUMNS};
use propertime::Error;

fn grid(n: usize, stop: f64) -> Vec<f64> {
    (0..n).map(|i| stop * i as f64 / (n - 1) as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conditional_state_is_normalized(beta in 0.0f64..2.5, t in 0.0f64..30.0, eps in 0.0f64..0.1) {
        let d = FockDim::new(64).unwrap();
        let p = ClockParams::with_ratio(eps, 1e3).unwrap();
        let prop = Propagator::new(&p, d, Variant::ExactDecomposition).unwrap();
        let dsp = state_dependent_displacement(beta, d).unwrap();
        let theta = Projector::ZeroOne.vector(d).unwrap();
        let c = conditional_point(&prop, &dsp, &theta, t).unwrap();
        let norm = c.c_g.norm_sqr() + c.c_e.norm_sqr();
        prop_assert!((c.success_prob - norm).abs() < 1e-14);
        // |ρ_eg| of a normalized pure qubit is at most 1/2, reached for equal weights
        let expected = c.c_g.norm() * c.c_e.norm() / norm;
        prop_assert!((c.rho_eg.norm() - expected).abs() < 1e-12);
        prop_assert!(c.rho_eg.norm() <= 0.5 + 1e-12);
    }
}

#[test]
fn witness_vanishes_without_entanglement() {
    let uncoupled = ClockParams::with_ratio(0.0, 1e3).unwrap();
    let res = run_ramsey(&RamseyConfig::new(
        uncoupled,
        MotionalPrep::Squeezed { r: 0.8, theta: 0.0 },
        grid(21, 30.0),
        Variant::Oracle,
    ))
    .unwrap();
    assert!(entanglement_witness(&res).unwrap().iter().all(|w| w.witness.abs() < 1e-12));

    let coupled = ClockParams::with_ratio(0.05, 1e3).unwrap();
    let res = run_ramsey(&RamseyConfig::new(
        coupled,
        MotionalPrep::Vacuum,
        grid(21, 30.0),
        Variant::DiagonalSods,
    ))
    .unwrap();
    assert!(entanglement_witness(&res).unwrap().iter().all(|w| w.witness.abs() < 1e-12));
}

#[test]
fn uncoupled_vacuum_keeps_full_visibility() {
    let p = ClockParams::with_ratio(0.0, 1e3).unwrap();
    let res = run_ramsey(&RamseyConfig::new(p, MotionalPrep::Vacuum, grid(11, 10.0), Variant::Oracle)).unwrap();
    assert!(res.points.iter().all(|q| (q.visibility - 1.0).abs() < 1e-14));
}

#[test]
fn replay_gives_identical_bytes() {
    let p = ClockParams::with_ratio(1e-3, 1e6).unwrap();
    let cfg = QsodsConfig::new(p, 2.0, Projector::ZeroOne, 2, 32);
    let a = run_qsods_protocol(&cfg).unwrap();
    let b = run_qsods_protocol(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(protocol_csv(&a).unwrap(), protocol_csv(&b).unwrap());
    assert_eq!(to_json(&a.summary).unwrap(), to_json(&b.summary).unwrap());
    let csv = protocol_csv(&a).unwrap();
    assert!(csv.starts_with(&PROTOCOL_COLUMNS.join(",")));
    assert_eq!(csv.lines().count(), 65);
    assert!((a.summary.mean_success_prob - qsods_success_probability(2.0)).abs() < 1e-3);
}

#[test]
fn vanishing_success_probability_is_flagged() {
    let p = ClockParams::with_ratio(1e-3, 1e6).unwrap();
    let mut cfg = QsodsConfig::new(p, 6.0, Projector::ZeroOne, 1, 32);
    cfg.window_periods = 0;
    let res = run_qsods_protocol(&cfg).unwrap();
    assert_eq!(res.summary.flagged_points, res.points.len());
    assert!(res.summary.fit.is_none());
    assert!(res.points.iter().all(|q| q.phase_unwrapped.is_nan()));
}

#[test]
fn projection_protocol_rejects_approximate_propagators() {
    let p = ClockParams::with_ratio(1e-3, 1e6).unwrap();
    let mut cfg = QsodsConfig::new(p, 1.0, Projector::ZeroOne, 1, 32);
    cfg.variant = Variant::DiagonalSods;
    assert!(matches!(run_qsods_protocol(&cfg), Err(Error::Config(_))));
}

#[test]
fn thermal_runs_refuse_the_witness() {
    let p = ClockParams::with_ratio(1e-2, 1e3).unwrap();
    let res = run_ramsey(&RamseyConfig::new(
        p,
        MotionalPrep::Thermal { nbar: 1.0 },
        grid(5, 4.0),
        Variant::DiagonalSods,
    ))
    .unwrap();
    assert_eq!(entanglement_witness(&res), Err(Error::InvalidWitnessInput));
}
