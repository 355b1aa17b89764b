//! Motional ground state with the clock-conditioned squeezing kept exactly.

use super::{Regime, ShiftResult};
use crate::C64;

fn zeta_lambda(eps_c: f64) -> (f64, f64) {
    (-(-eps_c).ln_1p() / 4.0, (1.0 - eps_c).sqrt())
}

fn overlap_denominator(eps_c: f64, omega_t: f64) -> C64 {
    let (zeta, lambda) = zeta_lambda(eps_c);
    let (c, s) = (zeta.cosh(), zeta.sinh());
    C64::new(c * c, 0.0) - C64::from_polar(s * s, -2.0 * lambda * omega_t)
}

/// `2ρ_eg = e^{−iω_c t − iωt(λ−1)/2} / √(cosh²ζ − e^{−2iλωt} sinh²ζ)` for the
/// vacuum, exact in `ε_c`.
pub fn ground_state_offdiag_full(eps_c: f64, omega_t: f64, omega_c_t_mod: f64) -> C64 {
    let (_, lambda) = zeta_lambda(eps_c);
    let w = overlap_denominator(eps_c, omega_t);
    C64::from_polar(1.0, -omega_c_t_mod - omega_t * (lambda - 1.0) / 2.0) / w.sqrt()
}

/// `V = sech ζ / (1 + tanh⁴ζ − 2 tanh²ζ cos 2λωt)^{1/4}`.
///
/// (A `sech²ζ` prefactor is sometimes quoted; it would give `V ≠ 1` at `t = 0`.)
pub fn ground_state_visibility_full(eps_c: f64, omega_t: f64) -> f64 {
    let (zeta, lambda) = zeta_lambda(eps_c);
    let t2 = zeta.tanh().powi(2);
    let sech = 1.0 / zeta.cosh();
    sech / (1.0 + t2 * t2 - 2.0 * t2 * (2.0 * lambda * omega_t).cos()).powf(0.25)
}

/// `1 − (ε_c²/16) sin²ωt`.
pub fn ground_state_visibility_series(eps_c: f64, omega_t: f64) -> f64 {
    1.0 - eps_c * eps_c / 16.0 * omega_t.sin().powi(2)
}

/// Exact extra phase `φ = ωt(λ−1)/2 + ½ arg(cosh²ζ − e^{−2iλωt} sinh²ζ)`.
///
/// The argument stays in the right half-plane, so this is continuous in `t`
/// without unwrapping.
pub fn ground_state_phase_full(eps_c: f64, omega_t: f64) -> f64 {
    let (_, lambda) = zeta_lambda(eps_c);
    omega_t * (lambda - 1.0) / 2.0 + overlap_denominator(eps_c, omega_t).arg() / 2.0
}

/// `φ ≃ −ωtε_c/4 − ε_c²(ωt/16 − sin 2ωt/32)`.
pub fn ground_state_phase_series(eps_c: f64, omega_t: f64) -> f64 {
    -omega_t * eps_c / 4.0 - eps_c * eps_c * (omega_t / 16.0 - (2.0 * omega_t).sin() / 32.0)
}

/// `φ/(ω_c t)` from the second-order phase:
/// `Δν/ν = −ε_m/4 − ε_mε_c/16 + ε_cε_m sin(2ωt)/(32ωt)`.
pub fn ground_state_fractional_shift_full(eps_c: f64, eps_m: f64, omega_t: f64) -> ShiftResult {
    let osc = if omega_t == 0.0 {
        eps_c * eps_m / 16.0
    } else {
        eps_c * eps_m * (2.0 * omega_t).sin() / (32.0 * omega_t)
    };
    ShiftResult {
        fractional_shift: Some(-eps_m / 4.0 - eps_m * eps_c / 16.0 + osc),
        phase_offset: Some(ground_state_phase_series(eps_c, omega_t)),
        visibility: ground_state_visibility_series(eps_c, omega_t),
        regime: Regime::SecondOrder,
    }
}
