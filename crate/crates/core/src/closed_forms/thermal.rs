use super::{Regime, ShiftResult};
use crate::dynamics::{constants, ClockParams};
use crate::C64;

/// `ω_c'(n) = ω_c (1 − ε_m(2n+1)/4)`, in the units of `params.omega_c`.
pub fn shifted_clock_frequency(n: u64, params: &ClockParams) -> f64 {
    params.omega_c * (1.0 - params.eps_m * (2.0 * n as f64 + 1.0) / 4.0)
}

/// Thermal second-order Doppler shift to first order, `Δν/ν = −ε_m(2n̄+1)/4`.
pub fn sods_thermal_first_order(nbar: f64, eps_m: f64) -> ShiftResult {
    ShiftResult {
        fractional_shift: Some(-eps_m * (2.0 * nbar + 1.0) / 4.0),
        phase_offset: None,
        visibility: 1.0,
        regime: Regime::FirstOrder,
    }
}

/// Vacuum shift `−ε_m/4`; identical (bitwise) to the thermal shift at `n̄ = 0`.
pub fn vsods(eps_m: f64) -> ShiftResult {
    sods_thermal_first_order(0.0, eps_m)
}

/// Classical limit `−k_B T / 2mc²`.
pub fn classical_sods(temperature_k: f64, mass_kg: f64) -> f64 {
    -constants::K_B * temperature_k / (2.0 * mass_kg * constants::C * constants::C)
}

/// `⟨v²⟩/c² = ε_m (n̄ + ½)` for a thermal (or, at `n̄ = 0`, vacuum) oscillator.
pub fn thermal_mean_v2_over_c2(nbar: f64, eps_m: f64) -> f64 {
    eps_m * (nbar + 0.5)
}

/// Clock coherence evolving with the averaged proper time `t(1 − ⟨v²⟩/2c²)`.
///
/// `omega_c_t` is only used multiplied by the small `⟨v²⟩/2c²`; the bare phase
/// enters through `omega_c_t_mod`.
pub fn semiclassical_offdiag(mean_v2_over_c2: f64, omega_c_t_mod: f64, omega_c_t: f64) -> C64 {
    C64::from_polar(1.0, -omega_c_t_mod + omega_c_t * mean_v2_over_c2 / 2.0)
}

fn check_eps(nbar: f64, eps: f64) {
    debug_assert!(nbar >= 0.0 && eps.is_finite(), "n̄={nbar}, ε={eps}");
}

/// Exact thermal coherence with `ε = ε_c ωt/4`:
/// `2ρ_eg = e^{−i(ω_c t − atan(tan ε (2n̄+1)))} / √(cos²ε + sin²ε (2n̄+1)²)`.
///
/// The arctangent is taken as `atan2((2n̄+1) sin ε, cos ε)`, which stays on the
/// branch that starts at 0 for `t = 0`.
pub fn thermal_offdiag_exact(nbar: f64, eps: f64, omega_c_t_mod: f64) -> C64 {
    check_eps(nbar, eps);
    let k = 2.0 * nbar + 1.0;
    let (s, c) = eps.sin_cos();
    let modulus = 1.0 / (c * c + s * s * k * k).sqrt();
    let advance = (k * s).atan2(c);
    C64::from_polar(modulus, advance - omega_c_t_mod)
}

/// First order in `εn̄`: phase advance `ε(2n̄+1)`, modulus `(1 − ε² + ε²(2n̄+1)²)^{−1/2}`.
pub fn thermal_low_t_offdiag(nbar: f64, eps: f64, omega_c_t_mod: f64) -> C64 {
    check_eps(nbar, eps);
    let k = 2.0 * nbar + 1.0;
    let modulus = 1.0 / (1.0 - eps * eps + eps * eps * k * k).sqrt();
    C64::from_polar(modulus, eps * k - omega_c_t_mod)
}

/// High-temperature form (`εn̄ ≳ 1`, `ε ≪ 1`): modulus `(1 + 4ε²n̄²)^{−1/2}`,
/// phase advance `atan(2εn̄)`.
pub fn thermal_high_t_offdiag(nbar: f64, eps: f64, omega_c_t_mod: f64) -> C64 {
    check_eps(nbar, eps);
    let x = 2.0 * eps * nbar;
    C64::from_polar(1.0 / (1.0 + x * x).sqrt(), x.atan() - omega_c_t_mod)
}

pub fn thermal_high_t(nbar: f64, eps: f64) -> ShiftResult {
    let z = thermal_high_t_offdiag(nbar, eps, 0.0);
    ShiftResult {
        fractional_shift: None,
        phase_offset: Some(-(2.0 * eps * nbar).atan()),
        visibility: z.norm(),
        regime: Regime::HighT,
    }
}
