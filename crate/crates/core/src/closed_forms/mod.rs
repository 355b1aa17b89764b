//! Analytic predictions, as pure functions of dimensionless inputs.
//!
//! Phase convention: the clock coherence is written `2ρ_eg = V e^{−i(ω_c t + φ)}`
//! with `ρ_eg = ⟨e|ρ|g⟩`, so `φ` is the extra phase the clock accumulates and a
//! negative slope `dφ/dt` is a redshift. Functions returning `ρ_eg` take the bare
//! clock phase only as `ω_c t mod 2π`; every physically relevant combination
//! (`ε_c ωt`, `ε_m ω_c t`) is passed separately.

mod ground;
mod qsods;
mod squeezed;
mod thermal;

pub use ground::{
    ground_state_fractional_shift_full, ground_state_offdiag_full, ground_state_phase_full,
    ground_state_phase_series, ground_state_visibility_full, ground_state_visibility_series,
};
pub use qsods::{
    naive_projection_phase, offdiag_leading_displaced, offdiag_leading_displaced_as_printed,
    qsods_averaged_offset, qsods_constant_phase, qsods_displacement_offset, qsods_optimal_beta,
    qsods_protocol_phase, qsods_protocol_phase_as_printed, qsods_success_probability,
    qsods_success_probability_full,
};
pub use squeezed::{
    sqsods, squeezed_offdiag_exact, visibility_squeezed, visibility_squeezed_approx,
    visibility_squeezed_exact, ApproxVisibility, VisibilityMode, BREAKDOWN_THRESHOLD,
};
pub use thermal::{
    classical_sods, semiclassical_offdiag, shifted_clock_frequency, sods_thermal_first_order,
    thermal_high_t, thermal_high_t_offdiag, thermal_low_t_offdiag, thermal_mean_v2_over_c2,
    thermal_offdiag_exact, vsods,
};

use serde::{Deserialize, Serialize};

/// Which approximation a result belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    FirstOrder,
    SecondOrder,
    Exact,
    HighT,
    TimeAveraged,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::FirstOrder => "first-order",
            Regime::SecondOrder => "second-order",
            Regime::Exact => "exact",
            Regime::HighT => "high-T",
            Regime::TimeAveraged => "time-averaged",
        }
    }
}

/// A frequency shift and/or phase offset with the visibility that goes with it.
///
/// `fractional_shift` is `Δν/ν`; `phase_offset` is `φ` in the module's phase
/// convention. Either is absent when the formula does not define it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftResult {
    pub fractional_shift: Option<f64>,
    pub phase_offset: Option<f64>,
    pub visibility: f64,
    pub regime: Regime,
}

/// `φ` from a rotating-frame coherence `2ρ_eg e^{iω_c t}`.
pub fn phase_lag(rotating: crate::C64) -> f64 {
    -crate::carg(rotating)
}
