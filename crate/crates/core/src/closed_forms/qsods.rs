//! Displacement-and-projection readout of the clock-conditioned squeezing.
//!
//! Phases follow the module convention `2ρ_eg = V e^{−i(ω_c t + φ)}`, where
//! `ρ_eg` is the clock coherence conditioned on the motional projection.

use std::f64::consts::SQRT_2;

use crate::C64;

/// Projection onto `(|0⟩+|2⟩)/√2` without displacement:
/// `φ = −ωtε_c/4 + (ε_c/4√2) sin(2ωt(1 − ε_c/4))`.
pub fn naive_projection_phase(eps_c: f64, omega_t: f64) -> f64 {
    -omega_t * eps_c / 4.0
        + eps_c / (4.0 * SQRT_2) * (2.0 * omega_t * (1.0 - eps_c / 4.0)).sin()
}

/// `arg(2 + 2√2 iβ − β²)`, the ε-independent phase set by the displacement.
pub fn qsods_displacement_offset(beta: f64) -> f64 {
    (2.0 * SQRT_2 * beta).atan2(2.0 - beta * beta)
}

fn sin2_coefficient(beta: f64) -> f64 {
    beta / (SQRT_2 * (2.0 + beta * beta))
}

fn projected_phase(beta: f64, eps_c: f64, omega_t: f64, osc: f64) -> f64 {
    -omega_t * eps_c / 4.0 + qsods_displacement_offset(beta)
        - eps_c * sin2_coefficient(beta) * omega_t.sin().powi(2)
        + eps_c * osc * (2.0 * omega_t).sin()
}

/// Conditional clock phase after displacement `β` and projection onto
/// `(|0⟩+|1⟩)/√2`, to first order in `ε_c`:
///
/// `φ = −ωtε_c/4 + arg(2+2√2iβ−β²) − βε_c sin²ωt/(√2(2+β²))
///      + β²ε_c (1 − β²/2) sin 2ωt / (8(2+β²))`.
pub fn qsods_protocol_phase(beta: f64, eps_c: f64, omega_t: f64) -> f64 {
    let b2 = beta * beta;
    projected_phase(beta, eps_c, omega_t, b2 * (1.0 - b2 / 2.0) / (8.0 * (2.0 + b2)))
}

/// Same expansion with the `sin 2ωt` coefficient `β²(3 − β²/2)/(8(2+β²))`
/// that circulates in the literature. It disagrees with direct simulation at
/// first order in `ε_c`; kept for comparison only.
pub fn qsods_protocol_phase_as_printed(beta: f64, eps_c: f64, omega_t: f64) -> f64 {
    let b2 = beta * beta;
    projected_phase(beta, eps_c, omega_t, b2 * (3.0 - b2 / 2.0) / (8.0 * (2.0 + b2)))
}

/// Time-averaged offset linear in `ε_c`: `φ_q = −βε_c / (2√2(2+β²))`.
pub fn qsods_constant_phase(beta: f64, eps_c: f64) -> f64 {
    -beta * eps_c / (2.0 * SQRT_2 * (2.0 + beta * beta))
}

/// Drive strength that maximizes `|φ_q|`.
pub fn qsods_optimal_beta() -> f64 {
    SQRT_2
}

/// Mean of the detrended protocol phase: displacement offset plus `φ_q`.
pub fn qsods_averaged_offset(beta: f64, eps_c: f64) -> f64 {
    qsods_displacement_offset(beta) + qsods_constant_phase(beta, eps_c)
}

/// Leading-order success probability `((2+β²)/4) e^{−β²/2}`.
pub fn qsods_success_probability(beta: f64) -> f64 {
    (2.0 + beta * beta) / 4.0 * (-beta * beta / 2.0).exp()
}

/// `(e^{−β²/2}/2)(1 + (β²/2)(1 − 3ε_c/8 − β²ε_c/16))`.
pub fn qsods_success_probability_full(beta: f64, eps_c: f64) -> f64 {
    let b2 = beta * beta;
    (-b2 / 2.0).exp() / 2.0 * (1.0 + b2 / 2.0 * (1.0 - 3.0 * eps_c / 8.0 - b2 * eps_c / 16.0))
}

fn displaced_offdiag(beta: f64, eps_c: f64, omega_t: f64, omega_c_t_mod: f64, osc: f64) -> C64 {
    let lead = omega_t * eps_c / 4.0 + eps_c * sin2_coefficient(beta) * omega_t.sin().powi(2)
        - eps_c * osc * (2.0 * omega_t).sin();
    C64::from_polar(1.0, -omega_c_t_mod - qsods_displacement_offset(beta)) * C64::new(1.0, lead)
}

/// Leading-order conditional coherence
/// `2ρ_eg = e^{−iω_c t} e^{−i arg(2+2√2iβ−β²)} (1 + i(ωtε_c/4 + …))`;
/// its phase is `−ω_c t − φ` with `φ` from [`qsods_protocol_phase`] to `O(ε_c)`.
pub fn offdiag_leading_displaced(beta: f64, eps_c: f64, omega_t: f64, omega_c_t_mod: f64) -> C64 {
    let b2 = beta * beta;
    displaced_offdiag(beta, eps_c, omega_t, omega_c_t_mod, b2 * (1.0 - b2 / 2.0) / (8.0 * (2.0 + b2)))
}

pub fn offdiag_leading_displaced_as_printed(
    beta: f64,
    eps_c: f64,
    omega_t: f64,
    omega_c_t_mod: f64,
) -> C64 {
    let b2 = beta * beta;
    displaced_offdiag(beta, eps_c, omega_t, omega_c_t_mod, b2 * (3.0 - b2 / 2.0) / (8.0 * (2.0 + b2)))
}
