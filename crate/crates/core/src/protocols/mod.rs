//! End-to-end simulations: Ramsey free evolution for an arbitrary motional
//! preparation, and the displacement-and-projection readout.
//!
//! Every reported phase is the extra clock phase `φ` of
//! `2ρ_eg = V e^{−i(ω_c t + φ)}`, computed from the coherence in the frame
//! rotating at `ω_c` and unwrapped along the time grid.

mod averaging;
mod qsods;
mod ramsey;

pub use averaging::time_average_phase;
pub use qsods::{
    conditional_point, run_qsods_protocol, state_dependent_displacement, ConditionalPoint,
    Displacement, Projector, QsodsConfig,
};
pub use ramsey::{entanglement_witness, ramsey_convergence, run_ramsey, RamseyConfig, WitnessPoint};

use serde::{Deserialize, Serialize};

use crate::analysis::{fit_fractional_shift, unwrap_phase_with_limit, FitResult};
use crate::closed_forms::phase_lag;
use crate::dynamics::{ClockParams, Variant};
use crate::fock::{
    squeezed_vacuum_with_tol, thermal_density_with_tol, FockDim,
    MotionalDensity, MotionalState,
};
use crate::{Error, Result, C64};

/// Initial motional state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MotionalPrep {
    Vacuum,
    Fock { k: usize },
    Thermal { nbar: f64 },
    Squeezed { r: f64, theta: f64 },
}

pub(crate) enum Prepared {
    Pure(MotionalState),
    Mixed(MotionalDensity),
}

impl Prepared {
    pub(crate) fn tail(&self) -> f64 {
        match self {
            Prepared::Pure(s) => s.tail_norm,
            Prepared::Mixed(m) => m.discarded_tail,
        }
    }
}

impl MotionalPrep {
    pub fn is_pure(&self) -> bool {
        !matches!(self, MotionalPrep::Thermal { .. })
    }

    pub(crate) fn prepare(&self, dim: FockDim, tol: f64) -> Result<Prepared> {
        Ok(match *self {
            MotionalPrep::Vacuum => Prepared::Pure(MotionalState::vacuum(dim)),
            MotionalPrep::Fock { k } => Prepared::Pure(MotionalState::fock(k, dim)?),
            MotionalPrep::Thermal { nbar } => {
                Prepared::Mixed(thermal_density_with_tol(nbar, dim, tol)?)
            }
            MotionalPrep::Squeezed { r, theta } => {
                Prepared::Pure(squeezed_vacuum_with_tol(r, theta, dim, tol)?)
            }
        })
    }
}

/// One grid point of a protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolPoint {
    pub omega_t: f64,
    /// Clock coherence in the frame rotating at `ω_c`.
    pub rho_eg: C64,
    pub visibility: f64,
    pub phase_unwrapped: f64,
    pub success_prob: f64,
    /// Success probability below [`UNDERFLOW_PROBABILITY`]; excluded from fits.
    pub flagged: bool,
}

/// Points whose success probability falls below this are flagged.
pub const UNDERFLOW_PROBABILITY: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSummary {
    pub dim: usize,
    pub variant: Variant,
    pub mixed_input: bool,
    pub fit: Option<FitResult>,
    pub averaged_phase: Option<f64>,
    pub min_visibility: f64,
    /// Largest `1 − V` along the run.
    pub max_witness: f64,
    /// Smallest clock purity `(1 + V²)/2`.
    pub min_purity: f64,
    pub mean_success_prob: f64,
    pub flagged_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolResult {
    pub points: Vec<ProtocolPoint>,
    pub summary: ProtocolSummary,
}

impl ProtocolResult {
    pub fn omega_t(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.omega_t).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.phase_unwrapped).collect()
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InsufficientData("empty time grid".into()));
    }
    if grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Config("time grid must be finite and nonnegative".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Raw per-point data before unwrapping.
pub(crate) struct RawPoint {
    pub omega_t: f64,
    pub rho_eg: C64,
    pub success_prob: f64,
}

/// Unwraps the phase, then fills in fit, average and witness summaries.
pub(crate) fn assemble(
    raw: Vec<RawPoint>,
    params: &ClockParams,
    dim: FockDim,
    variant: Variant,
    mixed_input: bool,
    unwrap_limit: f64,
    window_periods: Option<usize>,
) -> Result<ProtocolResult> {
    let flagged: Vec<bool> = raw
        .iter()
        .map(|p| p.success_prob < UNDERFLOW_PROBABILITY)
        .collect();
    let kept: Vec<usize> = (0..raw.len()).filter(|&i| !flagged[i]).collect();
    let wrapped: Vec<f64> = kept.iter().map(|&i| phase_lag(raw[i].rho_eg * 2.0)).collect();
    let unwrapped = unwrap_phase_with_limit(&wrapped, unwrap_limit).map_err(|e| match e {
        Error::UnwrapFailure { index, step, limit } => Error::UnwrapFailure {
            index: kept[index],
            step,
            limit,
        },
        other => other,
    })?;
    let mut phase = vec![f64::NAN; raw.len()];
    for (j, &i) in kept.iter().enumerate() {
        phase[i] = unwrapped[j];
    }
    let points: Vec<ProtocolPoint> = raw
        .iter()
        .enumerate()
        .map(|(i, p)| ProtocolPoint {
            omega_t: p.omega_t,
            rho_eg: p.rho_eg,
            visibility: (2.0 * p.rho_eg.norm()).min(1.0),
            phase_unwrapped: phase[i],
            success_prob: p.success_prob,
            flagged: flagged[i],
        })
        .collect();
    let kt: Vec<f64> = kept.iter().map(|&i| raw[i].omega_t).collect();
    let fit = if kt.len() >= 3 {
        Some(fit_fractional_shift(&kt, &unwrapped, params)?)
    } else {
        None
    };
    let averaged_phase = match window_periods {
        Some(w) if kept.len() == raw.len() => Some(time_average_phase(&kt, &unwrapped, w)?),
        Some(_) => {
            return Err(Error::InsufficientData(
                "flagged points inside the averaging window".into(),
            ))
        }
        None => None,
    };
    let vis = points.iter().filter(|p| !p.flagged).map(|p| p.visibility);
    let min_visibility = vis.clone().fold(1.0, f64::min);
    let n = points.len() as f64;
    let summary = ProtocolSummary {
        dim: dim.get(),
        variant,
        mixed_input,
        fit,
        averaged_phase,
        min_visibility,
        max_witness: 1.0 - min_visibility,
        min_purity: (1.0 + min_visibility * min_visibility) / 2.0,
        mean_success_prob: points.iter().map(|p| p.success_prob).sum::<f64>() / n,
        flagged_points: flagged.iter().filter(|&&f| f).count(),
    };
    Ok(ProtocolResult { points, summary })
}
