use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{assemble, check_grid, MotionalPrep, Prepared, ProtocolResult, RawPoint};
use crate::dynamics::{
    mixed_state_evolution, ClockParams, ClockSuperposition, Frame, Propagator, Variant,
};
use crate::fock::{FockDim, Truncation};
use crate::{Error, Result};

/// Ramsey free-evolution run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamseyConfig {
    pub params: ClockParams,
    pub prep: MotionalPrep,
    /// Strictly increasing `ωt` samples.
    pub grid: Vec<f64>,
    pub variant: Variant,
    /// Fixed dimension; `None` selects it adaptively from `truncation`.
    pub dim: Option<FockDim>,
    pub truncation: Truncation,
    /// Largest phase step accepted between neighbouring samples.
    pub unwrap_limit: f64,
    /// Trap periods for the time-averaged phase, if wanted.
    pub window_periods: Option<usize>,
}

impl RamseyConfig {
    pub fn new(params: ClockParams, prep: MotionalPrep, grid: Vec<f64>, variant: Variant) -> Self {
        Self {
            params,
            prep,
            grid,
            variant,
            dim: None,
            truncation: Truncation::default(),
            unwrap_limit: std::f64::consts::FRAC_PI_2,
            window_periods: None,
        }
    }

    pub fn with_dim(mut self, dim: FockDim) -> Self {
        self.dim = Some(dim);
        self
    }
}

fn prepare(config: &RamseyConfig) -> Result<(FockDim, Prepared)> {
    let tol = config.truncation.tol;
    match config.dim {
        Some(dim) => {
            let p = config.prep.prepare(dim, tol)?;
            if p.tail() >= tol {
                return Err(Error::TruncationOverflow {
                    dim: dim.get(),
                    tail: p.tail(),
                    tol,
                    required_dim: dim.get() * 2,
                });
            }
            Ok((dim, p))
        }
        None => config
            .truncation
            .adapt(|dim| config.prep.prepare(dim, tol), Prepared::tail),
    }
}

/// Prepares `(|g⟩+|e⟩)|φ_m⟩/√2`, evolves it with the chosen propagator and
/// records the reduced clock coherence at each grid point.
pub fn run_ramsey(config: &RamseyConfig) -> Result<ProtocolResult> {
    check_grid(&config.grid)?;
    config.params.validate()?;
    let (dim, prepared) = prepare(config)?;
    let prop = Propagator::new(&config.params, dim, config.variant)?;
    let clock = ClockSuperposition::balanced();
    let raw: Vec<RawPoint> = config
        .grid
        .par_iter()
        .map(|&t| {
            let reduced = match &prepared {
                Prepared::Pure(psi) => {
                    prop.ramsey_point(clock, &psi.amplitudes, t, Frame::ClockRotating)?
                }
                Prepared::Mixed(rho) => {
                    mixed_state_evolution(rho, &prop.at(t), clock, Frame::ClockRotating)?
                }
            };
            Ok(RawPoint {
                omega_t: t,
                rho_eg: reduced.rho_eg,
                success_prob: 1.0,
            })
        })
        .collect::<Result<_>>()?;
    assemble(
        raw,
        &config.params,
        dim,
        config.variant,
        !config.prep.is_pure(),
        config.unwrap_limit,
        config.window_periods,
    )
}

/// Largest change of `ρ_eg` when the dimension chosen for `config` is doubled.
pub fn ramsey_convergence(config: &RamseyConfig) -> Result<f64> {
    let (dim, _) = prepare(config)?;
    let base = run_ramsey(&config.clone().with_dim(dim))?;
    let doubled = run_ramsey(&config.clone().with_dim(dim.doubled()))?;
    Ok(base
        .points
        .iter()
        .zip(&doubled.points)
        .map(|(a, b)| (a.rho_eg - b.rho_eg).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessPoint {
    pub omega_t: f64,
    /// `1 − V`; positive values certify clock–motion entanglement.
    pub witness: f64,
    /// Clock purity `(1 + V²)/2`.
    pub purity: f64,
}

/// Entanglement witness series. Only meaningful for a pure global state, so
/// runs started from a thermal state are refused.
pub fn entanglement_witness(result: &ProtocolResult) -> Result<Vec<WitnessPoint>> {
    if result.summary.mixed_input {
        return Err(Error::InvalidWitnessInput);
    }
    Ok(result
        .points
        .iter()
        .map(|p| WitnessPoint {
            omega_t: p.omega_t,
            witness: 1.0 - p.visibility,
            purity: (1.0 + p.visibility * p.visibility) / 2.0,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{thermal_offdiag_exact, visibility_squeezed_exact};

    fn grid(n: usize, stop: f64) -> Vec<f64> {
        (0..n).map(|i| stop * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn vacuum_sods_run() {
        let p = ClockParams::with_ratio(1e-2, 1e3).unwrap();
        let cfg = RamseyConfig::new(p, MotionalPrep::Vacuum, grid(30, 40.0), Variant::DiagonalSods)
            .with_dim(FockDim::new(16).unwrap());
        let res = run_ramsey(&cfg).unwrap();
        assert!(res.points.iter().all(|q| (q.visibility - 1.0).abs() < 1e-14));
        let fit = res.summary.fit.unwrap();
        assert!((fit.fractional_shift / (-p.eps_m / 4.0) - 1.0).abs() < 1e-8);
        assert!(entanglement_witness(&res).unwrap().iter().all(|w| w.witness.abs() < 1e-12));
    }

    #[test]
    fn squeezed_visibility_matches_closed_form() {
        let p = ClockParams::with_ratio(1e-2, 1e3).unwrap();
        let cfg = RamseyConfig::new(
            p,
            MotionalPrep::Squeezed { r: 1.0, theta: 0.0 },
            grid(25, 60.0),
            Variant::DiagonalSods,
        );
        let res = run_ramsey(&cfg).unwrap();
        for q in &res.points {
            let th = p.eps_c * q.omega_t;
            assert!((q.visibility - visibility_squeezed_exact(1.0, th)).abs() < 1e-10);
        }
    }

    #[test]
    fn thermal_matches_polar_form() {
        let p = ClockParams::with_ratio(1e-2, 1e3).unwrap();
        let cfg = RamseyConfig::new(
            p,
            MotionalPrep::Thermal { nbar: 2.0 },
            grid(11, 40.0),
            Variant::DiagonalSods,
        );
        let res = run_ramsey(&cfg).unwrap();
        for q in &res.points {
            let z = thermal_offdiag_exact(2.0, p.eps_c * q.omega_t / 4.0, 0.0);
            assert!((q.rho_eg * 2.0 - z).norm() < 1e-10);
        }
        assert_eq!(entanglement_witness(&res), Err(Error::InvalidWitnessInput));
    }

    #[test]
    fn coarse_grid_fails_to_unwrap() {
        let p = ClockParams::with_ratio(0.5, 10.0).unwrap();
        let cfg = RamseyConfig::new(p, MotionalPrep::Vacuum, vec![0.0, 14.0, 28.0], Variant::DiagonalSods)
            .with_dim(FockDim::new(8).unwrap());
        assert!(matches!(run_ramsey(&cfg), Err(Error::UnwrapFailure { .. })));
    }

    #[test]
    fn bad_grid_rejected() {
        let p = ClockParams::with_ratio(0.01, 10.0).unwrap();
        let cfg = RamseyConfig::new(p, MotionalPrep::Vacuum, vec![0.0, 1.0, 1.0], Variant::Oracle);
        assert!(matches!(run_ramsey(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn replay_is_identical() {
        let p = ClockParams::with_ratio(0.05, 20.0).unwrap();
        let cfg = RamseyConfig::new(
            p,
            MotionalPrep::Squeezed { r: 0.5, theta: 0.2 },
            grid(16, 10.0),
            Variant::ExactDecomposition,
        );
        assert_eq!(run_ramsey(&cfg).unwrap(), run_ramsey(&cfg).unwrap());
    }
}
