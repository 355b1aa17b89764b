use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{assemble, check_grid, ProtocolResult, RawPoint};
use crate::dynamics::{ClockParams, Propagator, Variant};
use crate::fock::{quadratures, CVector, FockDim, HermitianSpectrum, Operator, Truncation};
use crate::{Error, Result, C64};

/// Motional state the displaced motion is projected onto.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projector {
    /// `(|0⟩ + |1⟩)/√2`.
    ZeroOne,
    /// `(|0⟩ + |2⟩)/√2`.
    ZeroTwo,
    /// Fock amplitudes of a normalized state.
    Custom(Vec<C64>),
}

impl Projector {
    pub fn vector(&self, dim: FockDim) -> Result<CVector> {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut v = CVector::zeros(dim.get());
        match self {
            Projector::ZeroOne => {
                v[0] = s;
                v[1] = s;
            }
            Projector::ZeroTwo => {
                if dim.get() < 3 {
                    return Err(Error::InvalidDimension(dim.get()));
                }
                v[0] = s;
                v[2] = s;
            }
            Projector::Custom(amps) => {
                let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
                if (norm - 1.0).abs() > 1e-12 {
                    return Err(Error::Config(format!("custom projector has norm² {norm}")));
                }
                if amps.len() > dim.get() {
                    return Err(Error::DimensionMismatch {
                        expected: dim.get(),
                        got: amps.len(),
                    });
                }
                for (k, z) in amps.iter().enumerate() {
                    v[k] = *z;
                }
            }
        }
        Ok(v)
    }
}

/// Clock-state-dependent displacement `e^{−iβ Z_c X}`: the ground branch gets
/// `e^{+iβX}`, the excited branch `e^{−iβX}`.
#[derive(Debug, Clone)]
pub struct Displacement {
    pub beta: f64,
    pub ground: Operator,
    pub excited: Operator,
}

/// Builds both displacement branches and checks that `|0⟩, |1⟩, |2⟩` stay
/// inside the truncation after displacement.
pub fn state_dependent_displacement(beta: f64, dim: FockDim) -> Result<Displacement> {
    displacement_with_tol(beta, dim, Truncation::default().tol)
}

fn displacement_with_tol(beta: f64, dim: FockDim, tol: f64) -> Result<Displacement> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::UnphysicalParameters(format!("displacement β={beta}")));
    }
    let (x, _) = quadratures(dim)?;
    let spec = HermitianSpectrum::new(&x)?;
    let ground = spec.propagator(-beta);
    let excited = spec.propagator(beta);
    let tail = (0..3.min(dim.get()))
        .map(|k| {
            (dim.tail_start()..dim.get())
                .map(|n| excited.matrix[(n, k)].norm_sqr())
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    if tail >= tol {
        return Err(Error::TruncationOverflow {
            dim: dim.get(),
            tail,
            tol,
            required_dim: dim.get() * 2,
        });
    }
    Ok(Displacement {
        beta,
        ground,
        excited,
    })
}

/// Displacement-and-projection run on the motional ground state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QsodsConfig {
    pub params: ClockParams,
    pub beta: f64,
    pub projector: Projector,
    pub grid: Vec<f64>,
    /// Whole trap periods used for the time-averaged phase.
    pub window_periods: usize,
    /// `oracle` or `exact-decomposition`.
    pub variant: Variant,
    pub dim: Option<FockDim>,
    pub truncation: Truncation,
    pub unwrap_limit: f64,
}

impl QsodsConfig {
    /// Uniform grid of `window_periods` trap periods at `samples_per_period`.
    pub fn new(
        params: ClockParams,
        beta: f64,
        projector: Projector,
        window_periods: usize,
        samples_per_period: usize,
    ) -> Self {
        let n = window_periods * samples_per_period;
        let grid = (0..n)
            .map(|i| std::f64::consts::TAU * i as f64 / samples_per_period as f64)
            .collect();
        Self {
            params,
            beta,
            projector,
            grid,
            window_periods,
            variant: Variant::ExactDecomposition,
            dim: None,
            truncation: Truncation::default(),
            unwrap_limit: std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Conditional clock state at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalPoint {
    /// `⟨ϑ|e^{+iβX} U_g|0⟩/√2`.
    pub c_g: C64,
    /// `⟨ϑ|e^{−iβX} U_e|0⟩/√2` (rotating frame).
    pub c_e: C64,
    /// Norm² of the projected joint state.
    pub success_prob: f64,
    /// Coherence of the renormalized clock state.
    pub rho_eg: C64,
}

/// Evolves `(|g⟩+|e⟩)|0⟩/√2` for `ωt`, displaces, and projects onto `theta`.
pub fn conditional_point(
    prop: &Propagator,
    displacement: &Displacement,
    theta: &CVector,
    omega_t: f64,
) -> Result<ConditionalPoint> {
    let dim = prop.dim();
    let mut vac = CVector::zeros(dim.get());
    vac[0] = C64::new(1.0, 0.0);
    // ⟨ϑ|D_g = (D_g† ϑ)†, with D_g† = D_e
    let wg = displacement.excited.apply(theta)?;
    let we = displacement.ground.apply(theta)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c_g = wg.dotc(&prop.apply_ground(omega_t, &vac)?) * s;
    let c_e = we.dotc(&prop.apply_excited(omega_t, &vac)?) * s;
    let success_prob = c_g.norm_sqr() + c_e.norm_sqr();
    let rho_eg = if success_prob > 0.0 {
        c_e * c_g.conj() / success_prob
    } else {
        C64::new(0.0, 0.0)
    };
    Ok(ConditionalPoint {
        c_g,
        c_e,
        success_prob,
        rho_eg,
    })
}

/// Runs the displacement-and-projection protocol over the configured grid.
pub fn run_qsods_protocol(config: &QsodsConfig) -> Result<ProtocolResult> {
    check_grid(&config.grid)?;
    config.params.validate()?;
    if !matches!(config.variant, Variant::Oracle | Variant::ExactDecomposition) {
        return Err(Error::Config(format!(
            "the projection protocol needs the oracle or exact-decomposition propagator, got {}",
            config.variant
        )));
    }
    let tol = config.truncation.tol;
    let (dim, displacement) = match config.dim {
        Some(d) => (d, displacement_with_tol(config.beta, d, tol)?),
        None => config
            .truncation
            .adapt(|d| displacement_with_tol(config.beta, d, tol), |_| 0.0)?,
    };
    let theta = config.projector.vector(dim)?;
    let prop = Propagator::new(&config.params, dim, config.variant)?;
    let raw: Vec<RawPoint> = config
        .grid
        .par_iter()
        .map(|&t| {
            let c = conditional_point(&prop, &displacement, &theta, t)?;
            Ok(RawPoint {
                omega_t: t,
                rho_eg: c.rho_eg,
                success_prob: c.success_prob,
            })
        })
        .collect::<Result<_>>()?;
    let window = (config.window_periods > 0).then_some(config.window_periods);
    assemble(
        raw,
        &config.params,
        dim,
        config.variant,
        false,
        config.unwrap_limit,
        window,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{
        naive_projection_phase, qsods_constant_phase, qsods_displacement_offset,
        qsods_success_probability,
    };
    use crate::fock::number_op;

    fn d(n: usize) -> FockDim {
        FockDim::new(n).unwrap()
    }

    #[test]
    fn displacement_basics() {
        let z = state_dependent_displacement(0.0, d(16)).unwrap();
        assert!(z.ground.max_abs_diff(&Operator::identity(d(16))) < 1e-13);
        let dsp = state_dependent_displacement(1.0, d(64)).unwrap();
        let mut vac = CVector::zeros(64);
        vac[0] = C64::new(1.0, 0.0);
        let moved = dsp.excited.apply(&vac).unwrap();
        let n = number_op(d(64)).apply(&moved).unwrap();
        assert!((moved.dotc(&n).re - 0.5).abs() < 1e-12);
        assert!(dsp.ground.max_abs_diff(&dsp.excited.adjoint()) < 1e-13);
        assert!(matches!(
            state_dependent_displacement(6.0, d(16)),
            Err(Error::TruncationOverflow { .. })
        ));
    }

    #[test]
    fn projected_amplitude_closed_form() {
        // ⟨ϑ|e^{+iβX}|0⟩ = e^{−β²/4}(1 + iβ/√2)/√2 for ϑ = (|0⟩+|1⟩)/√2
        let beta: f64 = 0.8;
        let dsp = state_dependent_displacement(beta, d(64)).unwrap();
        let theta = Projector::ZeroOne.vector(d(64)).unwrap();
        let mut vac = CVector::zeros(64);
        vac[0] = C64::new(1.0, 0.0);
        let amp = theta.dotc(&dsp.ground.apply(&vac).unwrap());
        let expected = C64::new(1.0, beta / 2f64.sqrt()) * ((-beta * beta / 4.0).exp() / 2f64.sqrt());
        assert!((amp - expected).norm() < 1e-13);
    }

    #[test]
    fn protocol_against_closed_forms() {
        let eps = 1e-4;
        let p = ClockParams::with_ratio(eps, 1e6).unwrap();
        for &beta in &[1.0, 2.0] {
            let mut cfg = QsodsConfig::new(p, beta, Projector::ZeroOne, 4, 32);
            cfg.dim = Some(d(64));
            let res = run_qsods_protocol(&cfg).unwrap();
            let avg = res.summary.averaged_phase.unwrap() - qsods_displacement_offset(beta);
            let q = qsods_constant_phase(beta, eps);
            assert!((avg / q - 1.0).abs() < 0.02, "{beta}: {avg} vs {q}");
            let mean_p = res.summary.mean_success_prob;
            assert!((mean_p - qsods_success_probability(beta)).abs() < 1e-3);
        }
    }

    #[test]
    fn naive_projection() {
        let eps = 1e-3;
        let p = ClockParams::with_ratio(eps, 1e6).unwrap();
        let mut cfg = QsodsConfig::new(p, 0.0, Projector::ZeroTwo, 2, 32);
        cfg.dim = Some(d(64));
        let res = run_qsods_protocol(&cfg).unwrap();
        for q in &res.points {
            assert!((q.phase_unwrapped - naive_projection_phase(eps, q.omega_t)).abs() < 1e-5);
        }
    }

    #[test]
    fn diagonal_variant_rejected() {
        let p = ClockParams::with_ratio(1e-3, 1e6).unwrap();
        let mut cfg = QsodsConfig::new(p, 1.0, Projector::ZeroOne, 1, 32);
        cfg.variant = Variant::DiagonalSods;
        assert!(matches!(run_qsods_protocol(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn custom_projector_must_be_normalized() {
        let bad = Projector::Custom(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(bad.vector(d(4)), Err(Error::Config(_))));
        let good = Projector::Custom(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        assert_eq!(good.vector(d(4)).unwrap()[1], C64::new(0.0, 0.8));
    }

    #[test]
    fn completeness_over_basis() {
        let dim = d(48);
        let p = ClockParams::with_ratio(1e-2, 1e6).unwrap();
        let prop = Propagator::new(&p, dim, Variant::ExactDecomposition).unwrap();
        let dsp = state_dependent_displacement(1.0, dim).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut family = vec![
            Projector::ZeroOne.vector(dim).unwrap(),
            Projector::Custom(vec![C64::new(s, 0.0), C64::new(-s, 0.0)])
                .vector(dim)
                .unwrap(),
        ];
        for k in 2..dim.get() {
            let mut v = CVector::zeros(dim.get());
            v[k] = C64::new(1.0, 0.0);
            family.push(v);
        }
        let total: f64 = family
            .iter()
            .map(|th| conditional_point(&prop, &dsp, th, 3.7).unwrap().success_prob)
            .sum();
        assert!((total - 1.0).abs() < 1e-10);
    }
}
