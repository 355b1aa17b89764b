//! Single declarative tolerance spec shared by the tests and `validate`.

use serde::{Deserialize, Serialize};

/// Every acceptance threshold. Missing keys take the defaults; unknown keys are
/// rejected by the deserializer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Minimum per-branch state fidelity, oracle vs decomposition.
    pub fidelity_min: f64,
    /// Pointwise `|2ρ_eg|` agreement of the full vacuum evolution.
    pub phase_abs_tol: f64,
    /// Relative accuracy of fitted fractional shifts.
    pub shift_rel_tol: f64,
    /// Allowed deviation of a two-point scaling exponent.
    pub scaling_band: f64,
    /// Gap between numeric visibility and its `ε_c²` series, relative to the drop.
    pub series_rel_tol: f64,
    /// Scaling band for the projection-protocol residual.
    pub qsods_scaling_band: f64,
    /// Numeric vs closed-form coherences (squeezed, thermal).
    pub closed_form_abs_tol: f64,
    pub visibility_al_abs_tol: f64,
    pub visibility_b_abs_tol: f64,
    pub sqsods_rel_tol: f64,
    /// Minimum gap between exact and approximate visibility that counts as breakdown.
    /// Not affected by [`Tolerances::loosened`].
    pub breakdown_min_deviation: f64,
    pub high_t_rel_tol: f64,
    pub averaged_offset_rel_tol: f64,
    pub success_prob_abs_tol: f64,
    pub naive_phase_abs_tol: f64,
    pub norm_tol: f64,
    pub unitarity_tol: f64,
    pub convergence_tol: f64,
    pub completeness_tol: f64,
    pub commutator_tol: f64,
    pub parity_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            fidelity_min: 1.0 - 1e-9,
            phase_abs_tol: 1e-9,
            shift_rel_tol: 1e-3,
            scaling_band: 0.2,
            series_rel_tol: 0.05,
            qsods_scaling_band: 0.3,
            closed_form_abs_tol: 1e-8,
            visibility_al_abs_tol: 0.005,
            visibility_b_abs_tol: 0.01,
            sqsods_rel_tol: 0.03,
            breakdown_min_deviation: 0.2,
            high_t_rel_tol: 0.02,
            averaged_offset_rel_tol: 0.05,
            success_prob_abs_tol: 0.005,
            naive_phase_abs_tol: 1e-5,
            norm_tol: 1e-12,
            unitarity_tol: 1e-10,
            convergence_tol: 1e-8,
            completeness_tol: 1e-10,
            commutator_tol: 1e-12,
            parity_tol: 1e-14,
        }
    }
}

impl Tolerances {
    /// Every bound widened by `factor` (fidelity through its infidelity).
    pub fn loosened(&self, factor: f64) -> Self {
        let f = factor;
        Self {
            fidelity_min: 1.0 - (1.0 - self.fidelity_min) * f,
            phase_abs_tol: self.phase_abs_tol * f,
            shift_rel_tol: self.shift_rel_tol * f,
            scaling_band: self.scaling_band * f,
            series_rel_tol: self.series_rel_tol * f,
            qsods_scaling_band: self.qsods_scaling_band * f,
            closed_form_abs_tol: self.closed_form_abs_tol * f,
            visibility_al_abs_tol: self.visibility_al_abs_tol * f,
            visibility_b_abs_tol: self.visibility_b_abs_tol * f,
            sqsods_rel_tol: self.sqsods_rel_tol * f,
            breakdown_min_deviation: self.breakdown_min_deviation,
            high_t_rel_tol: self.high_t_rel_tol * f,
            averaged_offset_rel_tol: self.averaged_offset_rel_tol * f,
            success_prob_abs_tol: self.success_prob_abs_tol * f,
            naive_phase_abs_tol: self.naive_phase_abs_tol * f,
            norm_tol: self.norm_tol * f,
            unitarity_tol: self.unitarity_tol * f,
            convergence_tol: self.convergence_tol * f,
            completeness_tol: self.completeness_tol * f,
            commutator_tol: self.commutator_tol * f,
            parity_tol: self.parity_tol * f,
        }
    }
}
