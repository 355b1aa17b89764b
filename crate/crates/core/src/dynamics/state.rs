use serde::{Deserialize, Serialize};

use super::PropagatorSet;
use crate::fock::{CVector, MotionalDensity, NORM_TOL};
use crate::{carg, Error, Result, C64};

/// Whether the excited block carries the bare clock phase `e^{−iω_c t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    Lab,
    ClockRotating,
}

/// Clock amplitudes `c_g|g⟩ + c_e|e⟩` of a product input state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockSuperposition {
    pub c_g: C64,
    pub c_e: C64,
}

impl ClockSuperposition {
    /// `(|g⟩ + |e⟩)/√2`.
    pub fn balanced() -> Self {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { c_g: s, c_e: s }
    }

    pub fn new(c_g: C64, c_e: C64) -> Result<Self> {
        let n = c_g.norm_sqr() + c_e.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::UnphysicalParameters(format!(
                "clock amplitudes have norm² {n}"
            )));
        }
        Ok(Self { c_g, c_e })
    }
}

/// Joint clock ⊗ motion pure state, `|g⟩⊗ground + |e⟩⊗excited`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeState {
    pub ground: CVector,
    pub excited: CVector,
    pub frame: Frame,
}

impl CompositeState {
    pub fn product(clock: ClockSuperposition, motion: &CVector, frame: Frame) -> Result<Self> {
        let n2 = motion.norm_squared();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::UnphysicalParameters(format!(
                "motional state has norm² {n2}"
            )));
        }
        Ok(Self {
            ground: motion * clock.c_g,
            excited: motion * clock.c_e,
            frame,
        })
    }

    /// `(|g⟩ + |e⟩)|φ⟩/√2`.
    pub fn balanced(motion: &CVector, frame: Frame) -> Result<Self> {
        Self::product(ClockSuperposition::balanced(), motion, frame)
    }

    pub fn dim(&self) -> usize {
        self.ground.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ground.norm_squared() + self.excited.norm_squared()
    }
}

/// Clock density matrix in the basis `(g, e)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockReducedState {
    pub rho: [[C64; 2]; 2],
    /// `⟨e|ρ|g⟩`.
    pub rho_eg: C64,
    /// `2|ρ_eg|`.
    pub visibility: f64,
    /// `arg ρ_eg` on `(−π, π]`.
    pub phase: f64,
}

impl ClockReducedState {
    pub fn from_elements(rho_gg: f64, rho_ee: f64, rho_eg: C64) -> Self {
        Self {
            rho: [
                [C64::new(rho_gg, 0.0), rho_eg.conj()],
                [rho_eg, C64::new(rho_ee, 0.0)],
            ],
            rho_eg,
            visibility: (2.0 * rho_eg.norm()).min(1.0),
            phase: carg(rho_eg),
        }
    }

    pub fn purity(&self) -> f64 {
        let r = &self.rho;
        (r[0][0] * r[0][0] + r[1][1] * r[1][1]).re + 2.0 * r[1][0].norm_sqr()
    }

    pub fn trace(&self) -> f64 {
        (self.rho[0][0] + self.rho[1][1]).re
    }
}

/// Applies both branch propagators; the lab frame also picks up `e^{−iω_c t}`.
pub fn evolve(state: &CompositeState, props: &PropagatorSet) -> Result<CompositeState> {
    let ground = props.ground.apply(&state.ground)?;
    let mut excited = props.excited.apply(&state.excited)?;
    if state.frame == Frame::Lab {
        excited *= C64::from_polar(1.0, -props.clock_phase);
    }
    Ok(CompositeState {
        ground,
        excited,
        frame: state.frame,
    })
}

/// Partial trace over the motion.
pub fn reduce_to_clock(state: &CompositeState) -> ClockReducedState {
    // ⟨e|ρ|g⟩ = Σ_n e_n g_n*
    let rho_eg = state.ground.dotc(&state.excited);
    ClockReducedState::from_elements(
        state.ground.norm_squared(),
        state.excited.norm_squared(),
        rho_eg,
    )
}

/// Reduced clock state for a mixed motional input `ρ_m` with the clock in `clock`.
///
/// Diagonal inputs are evolved as an ensemble of Fock states (each column of
/// the branch propagators weighted by its population); general inputs use
/// `ρ_eg = c_e c_g* Tr(U_e ρ_m U_g†)`.
pub fn mixed_state_evolution(
    rho_m: &MotionalDensity,
    props: &PropagatorSet,
    clock: ClockSuperposition,
    frame: Frame,
) -> Result<ClockReducedState> {
    let n = props.dim();
    if rho_m.matrix.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rho_m.matrix.nrows(),
        });
    }
    let ug = &props.ground.matrix;
    let ue = &props.excited.matrix;
    let (overlap, pop_g, pop_e) = if rho_m.is_diagonal() {
        let mut overlap = C64::new(0.0, 0.0);
        let mut pop_g = 0.0;
        let mut pop_e = 0.0;
        for k in 0..n {
            let p = rho_m.matrix[(k, k)].re;
            if p == 0.0 {
                continue;
            }
            let g = ug.column(k);
            let e = ue.column(k);
            overlap += g.dotc(&e) * p;
            pop_g += g.norm_squared() * p;
            pop_e += e.norm_squared() * p;
        }
        (overlap, pop_g, pop_e)
    } else {
        let cross = ue * &rho_m.matrix * ug.adjoint();
        let gg = ug * &rho_m.matrix * ug.adjoint();
        let ee = ue * &rho_m.matrix * ue.adjoint();
        (cross.trace(), gg.trace().re, ee.trace().re)
    };
    let mut rho_eg = clock.c_e * clock.c_g.conj() * overlap;
    if frame == Frame::Lab {
        rho_eg *= C64::from_polar(1.0, -props.clock_phase);
    }
    Ok(ClockReducedState::from_elements(
        clock.c_g.norm_sqr() * pop_g,
        clock.c_e.norm_sqr() * pop_e,
        rho_eg,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{ClockParams, Propagator, Variant};
    use crate::fock::{thermal_density_with_tol, FockDim, MotionalState};

    fn d(n: usize) -> FockDim {
        FockDim::new(n).unwrap()
    }

    #[test]
    fn product_state_has_full_visibility() {
        let psi = MotionalState::fock(3, d(8)).unwrap();
        let s = CompositeState::balanced(&psi.amplitudes, Frame::Lab).unwrap();
        let r = reduce_to_clock(&s);
        assert!((r.visibility - 1.0).abs() < 1e-15);
        assert!((r.purity() - 1.0).abs() < 1e-15);
        assert!((r.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_branches_have_zero_visibility() {
        let g = MotionalState::fock(0, d(4)).unwrap().amplitudes;
        let e = MotionalState::fock(1, d(4)).unwrap().amplitudes;
        let s = CompositeState {
            ground: g * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            excited: e * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            frame: Frame::ClockRotating,
        };
        let r = reduce_to_clock(&s);
        assert_eq!(r.visibility, 0.0);
        assert!((r.purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lab_phase_of_sods_vacuum() {
        let p = ClockParams::with_ratio(0.01, 50.0).unwrap();
        let prop = Propagator::new(&p, d(16), Variant::DiagonalSods).unwrap();
        let vac = MotionalState::vacuum(d(16));
        let t = 0.37;
        let s = CompositeState::balanced(&vac.amplitudes, Frame::Lab).unwrap();
        let r = reduce_to_clock(&evolve(&s, &prop.at(t)).unwrap());
        let expected = crate::principal(-50.0 * t * (1.0 - p.eps_m / 4.0));
        assert!((r.phase - expected).abs() < 1e-12);
        assert!((r.visibility - 1.0).abs() < 1e-14);
    }

    #[test]
    fn purity_tracks_visibility() {
        let p = ClockParams::with_ratio(0.1, 10.0).unwrap();
        let prop = Propagator::new(&p, d(64), Variant::Oracle).unwrap();
        let vac = MotionalState::vacuum(d(64));
        let s = CompositeState::balanced(&vac.amplitudes, Frame::ClockRotating).unwrap();
        for &t in &[0.5, 1.5, 3.0] {
            let r = reduce_to_clock(&prop.evolve(&s, t).unwrap());
            assert!((r.purity() - (1.0 + r.visibility.powi(2)) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ensemble_and_density_paths_agree() {
        let p = ClockParams::with_ratio(0.05, 10.0).unwrap();
        let dim = d(96);
        let set = Propagator::new(&p, dim, Variant::ExactDecomposition)
            .unwrap()
            .at(2.2);
        let rho = thermal_density_with_tol(1.0, dim, 1e-12).unwrap();
        let a = mixed_state_evolution(&rho, &set, ClockSuperposition::balanced(), Frame::Lab)
            .unwrap();
        // force the full-density path by adding a negligible coherence
        let mut general = rho.clone();
        general.matrix[(0, 1)] = C64::new(1e-300, 0.0);
        general.matrix[(1, 0)] = C64::new(1e-300, 0.0);
        assert!(!general.is_diagonal());
        let b = mixed_state_evolution(&general, &set, ClockSuperposition::balanced(), Frame::Lab)
            .unwrap();
        assert!((a.rho_eg - b.rho_eg).norm() < 1e-12);
    }

    #[test]
    fn vacuum_density_reproduces_pure_result() {
        let p = ClockParams::with_ratio(0.05, 10.0).unwrap();
        let dim = d(48);
        let prop = Propagator::new(&p, dim, Variant::Oracle).unwrap();
        let rho = thermal_density_with_tol(0.0, dim, 1e-12).unwrap();
        let vac = MotionalState::vacuum(dim);
        let mixed = mixed_state_evolution(
            &rho,
            &prop.at(3.0),
            ClockSuperposition::balanced(),
            Frame::ClockRotating,
        )
        .unwrap();
        let pure = prop
            .ramsey_point(ClockSuperposition::balanced(), &vac.amplitudes, 3.0, Frame::ClockRotating)
            .unwrap();
        assert!((mixed.rho_eg - pure.rho_eg).norm() < 1e-14);
    }
}
