//! Acceptance suite: each criterion is a function returning its checks.
//!
//! Thresholds come from [`Tolerances`], so loosening the spec can only turn
//! failures into passes. Checks of kind [`CheckKind::ExpectedFailure`] pass
//! when the documented breakdown is actually observed; informational checks
//! are reported but never gate the result.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::analysis::{compare_report_complex, scaling_exponent, CompareTolerance};
use crate::closed_forms::{
    ground_state_offdiag_full, ground_state_visibility_series, naive_projection_phase,
    qsods_constant_phase, qsods_displacement_offset, qsods_protocol_phase,
    qsods_protocol_phase_as_printed, qsods_success_probability, sqsods, squeezed_offdiag_exact,
    thermal_high_t_offdiag, thermal_offdiag_exact, visibility_squeezed_approx,
    visibility_squeezed_exact,
};
use crate::dynamics::{constants, ClockParams, Propagator, Species, Variant};
use crate::fock::{
    general_squeezed_vacuum, ladder_ops, quadratures, squeeze_operator, CVector, FockDim,
    MotionalState,
};
use crate::protocols::{
    conditional_point, ramsey_convergence, run_qsods_protocol, run_ramsey,
    state_dependent_displacement, MotionalPrep, ProtocolResult, Projector, QsodsConfig,
    RamseyConfig,
};
use crate::report::{protocol_csv, to_json};
use crate::tolerances::Tolerances;
use crate::{principal, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Required,
    /// Passes when a known approximation is seen to fail.
    ExpectedFailure,
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub name: String,
    pub kind: CheckKind,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn at_most(criterion: u8, name: &str, value: f64, threshold: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            kind: CheckKind::Required,
            pass: value <= threshold,
            value,
            threshold,
            detail: format!("{value:.3e} <= {threshold:.3e}"),
        }
    }

    fn at_least(criterion: u8, name: &str, value: f64, threshold: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            kind: CheckKind::Required,
            pass: value >= threshold,
            value,
            threshold,
            detail: format!("{value:.12} >= {threshold:.12}"),
        }
    }

    /// `|value − target| ≤ band`; `value` is reported, the deviation is checked.
    fn near(criterion: u8, name: &str, value: f64, target: f64, band: f64) -> Self {
        let dev = (value - target).abs();
        Self {
            criterion,
            name: name.into(),
            kind: CheckKind::Required,
            pass: dev <= band,
            value,
            threshold: band,
            detail: format!("{value:.6e} vs {target:.6e} (|Δ| {dev:.2e}, band {band:.2e})"),
        }
    }

    fn relative(criterion: u8, name: &str, value: f64, target: f64, rel: f64) -> Self {
        let dev = (value / target - 1.0).abs();
        Self {
            criterion,
            name: name.into(),
            kind: CheckKind::Required,
            pass: dev <= rel,
            value,
            threshold: rel,
            detail: format!("{value:.6e} vs {target:.6e} (rel {dev:.2e}, tol {rel:.2e})"),
        }
    }

    fn with_kind(mut self, kind: CheckKind) -> Self {
        self.kind = kind;
        self
    }

    fn failed(criterion: u8, name: &str, err: &crate::Error) -> Self {
        Self {
            criterion,
            name: name.into(),
            kind: CheckKind::Required,
            pass: false,
            value: f64::NAN,
            threshold: f64::NAN,
            detail: format!("error: {err}"),
        }
    }

    pub fn gates(&self) -> bool {
        self.kind != CheckKind::Informational
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub tolerances: Tolerances,
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn criteria(&self) -> Vec<u8> {
        let mut c: Vec<u8> = self.checks.iter().map(|c| c.criterion).collect();
        c.dedup();
        c
    }

    pub fn criterion_pass(&self, criterion: u8) -> bool {
        self.checks
            .iter()
            .filter(|c| c.criterion == criterion && c.gates())
            .all(|c| c.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().filter(|c| c.gates()).all(|c| c.pass)
    }

    /// One line per check followed by one PASS/FAIL line per criterion.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match (c.kind, c.pass) {
                (CheckKind::Informational, _) => "info",
                (_, true) => "ok",
                (_, false) => "FAILED",
            };
            let kind = match c.kind {
                CheckKind::ExpectedFailure => " [expected failure]",
                _ => "",
            };
            out.push_str(&format!(
                "  [{}] {:<6} {}{}: {}\n",
                c.criterion, tag, c.name, kind, c.detail
            ));
        }
        for k in self.criteria() {
            let verdict = if self.criterion_pass(k) { "PASS" } else { "FAIL" };
            out.push_str(&format!("criterion {k}: {verdict}\n"));
        }
        out
    }
}

pub type Criterion = fn(&Tolerances) -> Vec<CheckOutcome>;

pub const CRITERIA: [(u8, Criterion); 7] = [
    (1, criterion_1),
    (2, criterion_2),
    (3, criterion_3),
    (4, criterion_4),
    (5, criterion_5),
    (6, criterion_6),
    (7, criterion_7),
];

pub fn run_criterion(k: u8, tol: &Tolerances) -> Vec<CheckOutcome> {
    CRITERIA
        .iter()
        .find(|(n, _)| *n == k)
        .map(|(_, f)| f(tol))
        .unwrap_or_default()
}

pub fn run_all(tol: &Tolerances) -> ValidationReport {
    ValidationReport {
        tolerances: *tol,
        checks: CRITERIA.iter().flat_map(|(_, f)| f(tol)).collect(),
    }
}

fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
        .collect()
}

fn dim(n: usize) -> FockDim {
    FockDim::new(n).expect("fixed dimension")
}

fn collect(criterion: u8, name: &str, r: Result<Vec<CheckOutcome>>) -> Vec<CheckOutcome> {
    r.unwrap_or_else(|e| vec![CheckOutcome::failed(criterion, name, &e)])
}

// --- 1: oracle equivalence ---------------------------------------------------

/// Smallest per-branch fidelity `|⟨ψ_a|ψ_b⟩|²` between two propagators.
pub fn min_branch_fidelity(
    a: &Propagator,
    b: &Propagator,
    states: &[CVector],
    grid: &[f64],
) -> Result<f64> {
    let mut worst = 1.0f64;
    for psi in states {
        for &t in grid {
            let g = a.apply_ground(t, psi)?.dotc(&b.apply_ground(t, psi)?).norm_sqr();
            let e = a.apply_excited(t, psi)?.dotc(&b.apply_excited(t, psi)?).norm_sqr();
            worst = worst.min(g).min(e);
        }
    }
    Ok(worst)
}

fn criterion_1_states(d: FockDim) -> Result<Vec<CVector>> {
    Ok(vec![
        MotionalState::vacuum(d).amplitudes,
        MotionalState::fock(5, d)?.amplitudes,
        general_squeezed_vacuum(1.0, 0.0, d)?.amplitudes,
    ])
}

pub fn criterion_1(tol: &Tolerances) -> Vec<CheckOutcome> {
    collect(1, "oracle equivalence", (|| {
        let d = dim(256);
        let states = criterion_1_states(d)?;
        let grid = linspace(0.0, 50.0, 20);
        let mut out = Vec::new();
        for &eps in &[1e-3, 1e-2, 1e-1] {
            let p = ClockParams::with_ratio(eps, 1e3)?;
            let oracle = Propagator::new(&p, d, Variant::Oracle)?;
            let exact = Propagator::new(&p, d, Variant::ExactDecomposition)?;
            let f = min_branch_fidelity(&oracle, &exact, &states, &grid)?;
            out.push(CheckOutcome::at_least(
                1,
                &format!("oracle vs decomposition fidelity, eps_c={eps:e}"),
                f,
                tol.fidelity_min,
            ));
        }
        // the comparison must notice a squeezer with the wrong sign
        let p = ClockParams::with_ratio(1e-1, 1e3)?;
        let oracle = Propagator::new(&p, d, Variant::Oracle)?;
        let corrupted = Propagator::exact_with_zeta(&p, d, -p.zeta())?;
        let f = min_branch_fidelity(&oracle, &corrupted, &states, &grid)?;
        out.push(mutation_detected(f, tol.fidelity_min));
        Ok(out)
    })())
}

fn mutation_detected(f: f64, min: f64) -> CheckOutcome {
    CheckOutcome {
        criterion: 1,
        name: "flipped squeeze sign is detected".into(),
        kind: CheckKind::ExpectedFailure,
        pass: f < min,
        value: f,
        threshold: min,
        detail: format!("fidelity {f:.6} < {min:.12}"),
    }
}

// --- 2: thermal first-order shift ----------------------------------------------

pub fn criterion_2(tol: &Tolerances) -> Vec<CheckOutcome> {
    collect(2, "thermal shift", (|| {
        let nbar = 2.0;
        let p = ClockParams::with_ratio(1e-3, 1e6)?;
        let cfg = RamseyConfig::new(
            p,
            MotionalPrep::Thermal { nbar },
            linspace(0.0, 20.0, 41),
            Variant::DiagonalSods,
        );
        let res = run_ramsey(&cfg)?;
        let fit = res.summary.fit.expect("41 points fit");
        let expected = -p.eps_m * (2.0 * nbar + 1.0) / 4.0;
        Ok(vec![CheckOutcome::relative(
            2,
            "fitted fractional shift, nbar=2",
            fit.fractional_shift,
            expected,
            tol.shift_rel_tol,
        )])
    })())
}

// --- 3: vacuum, full propagator -----------------------------------------------

fn vacuum_run(eps_c: f64, variant: Variant, grid: Vec<f64>) -> Result<ProtocolResult> {
    let p = ClockParams::with_ratio(eps_c, 1e3)?;
    run_ramsey(&RamseyConfig::new(p, MotionalPrep::Vacuum, grid, variant))
}

pub fn criterion_3(tol: &Tolerances) -> Vec<CheckOutcome> {
    collect(3, "vacuum full propagator", (|| {
        let grid = linspace(0.0, 50.0, 101);
        let mut out = Vec::new();
        let mut drops = Vec::new();
        for &eps in &[1e-2, 1e-3] {
            let res = vacuum_run(eps, Variant::Oracle, grid.clone())?;
            if eps == 1e-2 {
                let numeric: Vec<C64> = res.points.iter().map(|q| q.rho_eg * 2.0).collect();
                let reference: Vec<C64> = grid
                    .iter()
                    .map(|&t| ground_state_offdiag_full(eps, t, 0.0))
                    .collect();
                let rep = compare_report_complex(
                    "2 rho_eg vs closed form",
                    (&grid, &numeric),
                    (&grid, &reference),
                    CompareTolerance::absolute(tol.phase_abs_tol),
                )?;
                out.push(CheckOutcome::at_most(
                    3,
                    "pointwise coherence, eps_c=1e-2",
                    rep.max_abs,
                    tol.phase_abs_tol,
                ));
                // the series oscillates at ω rather than λω, so it drifts by
                // ~ε_cωt/2 in phase; compare over the first trap period only
                let series_dev = res
                    .points
                    .iter()
                    .filter(|q| q.omega_t <= TAU)
                    .map(|q| (q.visibility - ground_state_visibility_series(eps, q.omega_t)).abs())
                    .fold(0.0, f64::max);
                let scale = eps * eps / 16.0;
                out.push(CheckOutcome::at_most(
                    3,
                    "visibility vs 1-(eps_c^2/16)sin^2 over one period, relative to the drop",
                    series_dev / scale,
                    tol.series_rel_tol,
                ));
            }
            drops.push(res.points.iter().map(|q| 1.0 - q.visibility).fold(0.0, f64::max));
        }
        let k = scaling_exponent(1e-2, drops[0], 1e-3, drops[1])?;
        out.push(CheckOutcome::near(3, "visibility-drop scaling exponent", k, 2.0, tol.scaling_band));
        Ok(out)
    })())
}

// --- 4: squeezed visibility, presets -------------------------------------------

/// Al⁺ preset at a 20 MHz trap; B⁺ shares its clock and trap, only the mass changes.
pub fn preset_params() -> Result<(ClockParams, ClockParams)> {
    let al = ClockParams::preset(Species::AlPlus, 20e6)?;
    let b = al.with_mass(Species::BPlus.mass_amu() * constants::AMU)?;
    Ok((al, b))
}

pub const PRESET_SQUEEZING: f64 = 2.26;

pub fn criterion_4(tol: &Tolerances) -> Vec<CheckOutcome> {
    collect(4, "squeezed visibility", (|| {
        let mut out = Vec::new();
        let r = 1.0;
        let p = ClockParams::with_ratio(1e-2, 1e3)?;
        let grid = linspace(0.0, 200.0, 41);
        let res = run_ramsey(&RamseyConfig::new(
            p,
            MotionalPrep::Squeezed { r, theta: 0.0 },
            grid.clone(),
            Variant::DiagonalSods,
        ))?;
        let numeric: Vec<C64> = res.points.iter().map(|q| q.rho_eg * 2.0).collect();
        let reference: Vec<C64> = grid
            .iter()
            .map(|&t| squeezed_offdiag_exact(r, p.eps_c * t, 0.0))
            .collect();
        let rep = compare_report_complex(
            "squeezed coherence",
            (&grid, &numeric),
            (&grid, &reference),
            CompareTolerance::absolute(tol.closed_form_abs_tol),
        )?;
        out.push(CheckOutcome::at_most(
            4,
            "diagonal run vs exact squeezed form, r=1",
            rep.max_abs,
            tol.closed_form_abs_tol,
        ));

        let (al, b) = preset_params()?;
        let r = PRESET_SQUEEZING;
        let th_al = al.theta(1.0);
        let v_al = visibility_squeezed_approx(r, th_al).value;
        out.push(CheckOutcome::near(4, "Al+ visibility (approximation)", v_al, 0.93, tol.visibility_al_abs_tol));
        let v_al_exact = visibility_squeezed_exact(r, th_al);
        out.push(
            CheckOutcome::near(4, "Al+ visibility (exact)", v_al_exact, 0.93, tol.visibility_al_abs_tol)
                .with_kind(CheckKind::Informational),
        );
        let shift = sqsods(r, al.eps_m).fractional_shift.unwrap_or(f64::NAN);
        out.push(CheckOutcome::relative(4, "Al+ squeezed shift", shift, -3.8e-17, tol.sqsods_rel_tol));

        let th_b = b.theta(1.0);
        let v_b = visibility_squeezed_exact(r, th_b);
        out.push(CheckOutcome::near(4, "B+ visibility (exact)", v_b, 0.76, tol.visibility_b_abs_tol));
        let approx_b = visibility_squeezed_approx(r, th_b);
        let gap = (v_b - approx_b.value).abs();
        out.push(CheckOutcome {
            criterion: 4,
            name: "B+ approximation breaks down".into(),
            kind: CheckKind::ExpectedFailure,
            pass: gap > tol.breakdown_min_deviation && approx_b.breakdown,
            value: gap,
            threshold: tol.breakdown_min_deviation,
            detail: format!(
                "approx {:.5} vs exact {v_b:.5}: deviation {gap:.3} > {:.2}, flagged {}",
                approx_b.value, tol.breakdown_min_deviation, approx_b.breakdown
            ),
        });
        Ok(out)
    })())
}

// --- 5: thermal exact ------------------------------------------------------------

pub fn criterion_5(tol: &Tolerances) -> Vec<CheckOutcome> {
    collect(5, "thermal exact", (|| {
        let mut out = Vec::new();
        // ε = ε_c ωt / 4 reaches 0.1 at the end of the grid
        let p = ClockParams::with_ratio(1e-2, 1e3)?;
        let grid = linspace(0.0, 40.0, 21);
        for &nbar in &[1.0, 2.0, 5.0] {
            let res = run_ramsey(&RamseyConfig::new(
                p,
                MotionalPrep::Thermal { nbar },
                grid.clone(),
                Variant::DiagonalSods,
            ))?;
            let (mut dm, mut dp) = (0.0f64, 0.0f64);
            for q in &res.points {
                let z = thermal_offdiag_exact(nbar, p.eps_c * q.omega_t / 4.0, 0.0);
                dm = dm.max((2.0 * q.rho_eg.norm() - z.norm()).abs());
                dp = dp.max((q.phase_unwrapped + z.arg()).abs());
            }
            out.push(CheckOutcome::at_most(5, &format!("modulus, nbar={nbar}"), dm, tol.closed_form_abs_tol));
            out.push(CheckOutcome::at_most(5, &format!("phase, nbar={nbar}"), dp, tol.closed_form_abs_tol));
        }
        let (nbar, eps) = (50.0, 0.01);
        let exact = thermal_offdiag_exact(nbar, eps, 0.0);
        let high = thermal_high_t_offdiag(nbar, eps, 0.0);
        out.push(CheckOutcome::relative(5, "high-T modulus at eps*nbar=0.5", high.norm(), exact.norm(), tol.high_t_rel_tol));
        out.push(CheckOutcome::relative(5, "high-T phase at eps*nbar=0.5", high.arg(), exact.arg(), tol.high_t_rel_tol));
        Ok(out)
    })())
}

// --- 6: projection protocol -----------------------------------------------------

pub const QSODS_PERIODS: usize = 10;
pub const QSODS_SAMPLES_PER_PERIOD: usize = 32;

fn qsods_run(beta: f64, eps_c: f64, projector: Projector) -> Result<ProtocolResult> {
    let p = ClockParams::with_ratio(eps_c, 1e6)?;
    run_qsods_protocol(&QsodsConfig::new(
        p,
        beta,
        projector,
        QSODS_PERIODS,
        QSODS_SAMPLES_PER_PERIOD,
    ))
}

fn max_phase_residual(res: &ProtocolResult, model: impl Fn(f64) -> f64) -> f64 {
    res.points
        .iter()
        .filter(|q| !q.flagged)
        .map(|q| principal(q.phase_unwrapped - model(q.omega_t)).abs())
        .fold(0.0, f64::max)
}

pub fn criterion_6(tol: &Tolerances) -> Vec<CheckOutcome> {
    collect(6, "projection protocol", (|| {
        let mut out = Vec::new();
        let (e1, e2) = (1e-3, 1e-4);
        for &beta in &[0.5, 1.0, 2.0] {
            let a = qsods_run(beta, e1, Projector::ZeroOne)?;
            let b = qsods_run(beta, e2, Projector::ZeroOne)?;
            let r1 = max_phase_residual(&a, |t| qsods_protocol_phase(beta, e1, t));
            let r2 = max_phase_residual(&b, |t| qsods_protocol_phase(beta, e2, t));
            let k = scaling_exponent(e1, r1, e2, r2)?;
            out.push(CheckOutcome::near(
                6,
                &format!("pointwise residual exponent, beta={beta}"),
                k,
                2.0,
                tol.qsods_scaling_band,
            ));
            let p1 = max_phase_residual(&a, |t| qsods_protocol_phase_as_printed(beta, e1, t));
            let p2 = max_phase_residual(&b, |t| qsods_protocol_phase_as_printed(beta, e2, t));
            if let Ok(kp) = scaling_exponent(e1, p1, e2, p2) {
                out.push(
                    CheckOutcome::near(
                        6,
                        &format!("residual exponent with the alternative sin 2wt coefficient, beta={beta}"),
                        kp,
                        2.0,
                        tol.qsods_scaling_band,
                    )
                    .with_kind(CheckKind::Informational),
                );
            }
            let avg = a.summary.averaged_phase.unwrap_or(f64::NAN) - qsods_displacement_offset(beta);
            out.push(CheckOutcome::relative(
                6,
                &format!("time-averaged offset, beta={beta}"),
                avg,
                qsods_constant_phase(beta, e1),
                tol.averaged_offset_rel_tol,
            ));
            out.push(CheckOutcome::near(
                6,
                &format!("mean success probability, beta={beta}"),
                a.summary.mean_success_prob,
                qsods_success_probability(beta),
                tol.success_prob_abs_tol,
            ));
            if beta == 2.0 {
                out.push(CheckOutcome::near(
                    6,
                    "success probability at beta=2",
                    a.summary.mean_success_prob,
                    0.203,
                    tol.success_prob_abs_tol,
                ));
            }
        }
        let naive = qsods_run(0.0, e1, Projector::ZeroTwo)?;
        let r = max_phase_residual(&naive, |t| naive_projection_phase(e1, t));
        out.push(CheckOutcome::at_most(6, "naive (|0>+|2>) projection phase", r, tol.naive_phase_abs_tol));
        Ok(out)
    })())
}

// --- 7: property suite -----------------------------------------------------------

pub fn criterion_7(tol: &Tolerances) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    out.extend(collect(7, "norm preservation", norm_checks(tol)));
    out.extend(collect(7, "truncation convergence", convergence_checks(tol)));
    out.extend(collect(7, "canonical commutator", commutator_check(tol)));
    out.extend(collect(7, "squeeze parity", parity_check(tol)));
    out.extend(collect(7, "completeness", completeness_check(tol)));
    out.extend(collect(7, "deterministic replay", replay_check()));
    out
}

fn norm_checks(tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let d = dim(128);
    let states = criterion_1_states(d)?;
    let p = ClockParams::with_ratio(0.1, 1e3)?;
    let times = [0.7, 13.0, 50.0];
    let mut norm_dev = 0.0f64;
    let mut unitarity = 0.0f64;
    for variant in [Variant::Oracle, Variant::ExactDecomposition, Variant::DiagonalSods] {
        let prop = Propagator::new(&p, d, variant)?;
        for &t in &times {
            for psi in &states {
                let g = prop.apply_ground(t, psi)?.norm_squared();
                let e = prop.apply_excited(t, psi)?.norm_squared();
                norm_dev = norm_dev.max((g - 1.0).abs()).max((e - 1.0).abs());
            }
        }
        unitarity = unitarity.max(prop.at(13.0).unitarity_error());
    }
    Ok(vec![
        CheckOutcome::at_most(7, "norm preservation", norm_dev, tol.norm_tol),
        CheckOutcome::at_most(7, "dense propagator unitarity", unitarity, tol.unitarity_tol),
    ])
}

fn convergence_checks(tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let grid = linspace(0.0, 50.0, 11);
    let p = ClockParams::with_ratio(1e-2, 1e3)?;
    let squeezed = ramsey_convergence(&RamseyConfig::new(
        p,
        MotionalPrep::Squeezed { r: 1.0, theta: 0.0 },
        grid.clone(),
        Variant::ExactDecomposition,
    ))?;
    let thermal = ramsey_convergence(&RamseyConfig::new(
        p,
        MotionalPrep::Thermal { nbar: 2.0 },
        grid,
        Variant::Oracle,
    ))?;
    Ok(vec![
        CheckOutcome::at_most(7, "dim doubling, squeezed r=1", squeezed, tol.convergence_tol),
        CheckOutcome::at_most(7, "dim doubling, thermal nbar=2", thermal, tol.convergence_tol),
    ])
}

fn commutator_check(tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let d = dim(64);
    let n = d.get();
    let (x, pq) = quadratures(d)?;
    let (a, ad) = ladder_ops(d)?;
    let xp = &x.matrix * &pq.matrix - &pq.matrix * &x.matrix;
    let aad = &a.matrix * &ad.matrix - &ad.matrix * &a.matrix;
    // the last level is a truncation artifact
    let mut dev = 0.0f64;
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let delta = if i == j { 1.0 } else { 0.0 };
            dev = dev
                .max((xp[(i, j)] - C64::new(0.0, delta)).norm())
                .max((aad[(i, j)] - C64::new(delta, 0.0)).norm());
        }
    }
    Ok(vec![CheckOutcome::at_most(7, "[X,P]=i and [a,a+]=1 below the top level", dev, tol.commutator_tol)])
}

fn parity_check(tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let s = squeeze_operator(1.0, dim(256))?;
    let odd = (1..256)
        .step_by(2)
        .map(|n| s.matrix[(n, 0)].norm())
        .fold(0.0, f64::max);
    Ok(vec![CheckOutcome::at_most(7, "S(r)|0> has no odd-level support", odd, tol.parity_tol)])
}

fn completeness_check(tol: &Tolerances) -> Result<Vec<CheckOutcome>> {
    let d = dim(64);
    let p = ClockParams::with_ratio(1e-2, 1e3)?;
    let prop = Propagator::new(&p, d, Variant::ExactDecomposition)?;
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut worst = 0.0f64;
    for &beta in &[0.5, 1.0, 2.0] {
        let dsp = state_dependent_displacement(beta, d)?;
        // orthonormal basis containing the protocol projector
        let mut basis = Vec::with_capacity(d.get());
        for sign in [1.0, -1.0] {
            let mut v = CVector::zeros(d.get());
            v[0] = s;
            v[1] = s * sign;
            basis.push(v);
        }
        for k in 2..d.get() {
            let mut v = CVector::zeros(d.get());
            v[k] = C64::new(1.0, 0.0);
            basis.push(v);
        }
        for &t in &[0.0, 3.3, 17.0] {
            let mut total = 0.0;
            for v in &basis {
                total += conditional_point(&prop, &dsp, v, t)?.success_prob;
            }
            worst = worst.max((total - 1.0).abs());
        }
    }
    Ok(vec![CheckOutcome::at_most(7, "sum of conditional probabilities", worst, tol.completeness_tol)])
}

fn replay_check() -> Result<Vec<CheckOutcome>> {
    let p = ClockParams::with_ratio(1e-3, 1e6)?;
    let cfg = QsodsConfig::new(p, 1.0, Projector::ZeroOne, 2, QSODS_SAMPLES_PER_PERIOD);
    let render = || -> Result<String> {
        let r = run_qsods_protocol(&cfg)?;
        Ok(protocol_csv(&r)? + &to_json(&r.summary)?)
    };
    let (a, b) = (render()?, render()?);
    let same = a == b;
    Ok(vec![CheckOutcome {
        criterion: 7,
        name: "library replay is byte-identical".into(),
        kind: CheckKind::Required,
        pass: same,
        value: if same { 0.0 } else { 1.0 },
        threshold: 0.0,
        detail: format!("{} bytes, identical: {same}", a.len()),
    }])
}
