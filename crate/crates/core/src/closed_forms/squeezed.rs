use serde::{Deserialize, Serialize};

use super::{Regime, ShiftResult};
use crate::C64;

/// Coherence for a squeezed-vacuum motional state under the number-diagonal
/// evolution, with `Θ = ε_m ω_c t`:
/// `2ρ_eg = e^{−iω_c t(1−ε_m/4)} / √(cosh²r − e^{iΘ} sinh²r)` (principal root).
pub fn squeezed_offdiag_exact(r: f64, theta: f64, omega_c_t_mod: f64) -> C64 {
    let (c, s) = (r.cosh(), r.sinh());
    let w = C64::new(c * c, 0.0) - C64::from_polar(s * s, theta);
    C64::from_polar(1.0, theta / 4.0 - omega_c_t_mod) / w.sqrt()
}

/// Squeezing-enhanced shift `Δν/ν ≃ −(ε_m/4) cosh 2r`.
pub fn sqsods(r: f64, eps_m: f64) -> ShiftResult {
    ShiftResult {
        fractional_shift: Some(-eps_m / 4.0 * (2.0 * r).cosh()),
        phase_offset: None,
        visibility: 1.0,
        regime: Regime::FirstOrder,
    }
}

/// `V = (cosh²2r sin²(Θ/2) + cos²(Θ/2))^{−1/4}`.
pub fn visibility_squeezed_exact(r: f64, theta: f64) -> f64 {
    let (s, c) = (theta / 2.0).sin_cos();
    let ch = (2.0 * r).cosh();
    (ch * ch * s * s + c * c).powf(-0.25)
}

/// Small-`Θ` visibility with an explicit validity flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxVisibility {
    pub value: f64,
    /// `(Θ/2) cosh 2r` — the expansion parameter.
    pub expansion: f64,
    /// Set when the expansion parameter reaches [`BREAKDOWN_THRESHOLD`].
    pub breakdown: bool,
}

/// The quadratic visibility formula is not trusted once `(Θ/2)cosh 2r` reaches this.
pub const BREAKDOWN_THRESHOLD: f64 = 1.0;

/// `V ≃ 1 − (Θ²/16) sinh²2r`.
pub fn visibility_squeezed_approx(r: f64, theta: f64) -> ApproxVisibility {
    let sh = (2.0 * r).sinh();
    let expansion = (theta / 2.0).abs() * (2.0 * r).cosh();
    ApproxVisibility {
        value: 1.0 - theta * theta / 16.0 * sh * sh,
        expansion,
        breakdown: expansion >= BREAKDOWN_THRESHOLD,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VisibilityMode {
    Exact,
    Approx,
}

pub fn visibility_squeezed(r: f64, theta: f64, mode: VisibilityMode) -> f64 {
    match mode {
        VisibilityMode::Exact => visibility_squeezed_exact(r, theta),
        VisibilityMode::Approx => visibility_squeezed_approx(r, theta).value,
    }
}
