use serde::{Deserialize, Serialize};

use super::{build_hamiltonian, BlockHamiltonian, ClockParams, ClockSuperposition, CompositeState};
use crate::fock::{
    a_squared, squeeze_operator, CMatrix, CVector, FockDim, HermitianSpectrum, Operator,
    OperatorKind,
};
use crate::{Error, Result, C64};

/// How the excited-branch propagator is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Brute-force `exp(−iHt)` of each clock block by eigendecomposition.
    Oracle,
    /// `S(ζ) e^{−iλωt(n+½)} S†(ζ)`, exact in `ε_c`.
    ExactDecomposition,
    /// Number-diagonal branch with the shifted clock frequency `ω_c(1 − ε_m(2n+1)/4)`;
    /// drops the clock-conditioned squeezing entirely.
    DiagonalSods,
    /// First order in `ε_c` around the diagonal branch, with the `a†²`, `a²`
    /// sandwich terms. Unitary only to `O(ε_c²)`.
    Perturbative,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Oracle,
        Variant::ExactDecomposition,
        Variant::DiagonalSods,
        Variant::Perturbative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Oracle => "oracle",
            Variant::ExactDecomposition => "exact-decomposition",
            Variant::DiagonalSods => "diagonal-sods",
            Variant::Perturbative => "perturbative",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Variant::Oracle),
            "exact" | "exact-decomposition" => Ok(Variant::ExactDecomposition),
            "diagonal-sods" | "sods" => Ok(Variant::DiagonalSods),
            "perturbative" => Ok(Variant::Perturbative),
            other => Err(Error::Config(format!("unknown propagator variant '{other}'"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense branch propagators at one time.
///
/// `excited` is in the frame rotating at `ω_c`; the lab-frame branch is
/// `e^{−i clock_phase} · excited` with `clock_phase = ω_c t mod 2π`.
#[derive(Debug, Clone)]
pub struct PropagatorSet {
    pub ground: Operator,
    pub excited: Operator,
    /// Dimensionless time `ωt`.
    pub omega_t: f64,
    pub variant: Variant,
    pub zeta: f64,
    pub lambda: f64,
    pub clock_phase: f64,
}

impl PropagatorSet {
    pub fn dim(&self) -> usize {
        self.ground.dim()
    }

    pub fn excited_lab(&self) -> Operator {
        Operator {
            matrix: &self.excited.matrix * C64::from_polar(1.0, -self.clock_phase),
            kind: self.excited.kind,
        }
    }

    /// Largest `max |U†U − I|` over both branches.
    pub fn unitarity_error(&self) -> f64 {
        self.ground
            .unitarity_error()
            .max(self.excited.unitarity_error())
    }

    /// Time in seconds for physical parameters, otherwise in units of `1/ω`.
    pub fn seconds(&self, params: &ClockParams) -> f64 {
        self.omega_t / params.omega
    }
}

enum Excited {
    Spectrum(HermitianSpectrum),
    Squeezed { s: CMatrix, s_adj: CMatrix },
    Diagonal,
    Perturbative { a2: CMatrix },
}

/// Propagator factory for one parameter point and dimension.
///
/// Construction does the expensive work once (eigendecomposition, squeezer);
/// afterwards a state is propagated to any time in `O(dim²)`.
pub struct Propagator {
    variant: Variant,
    dim: FockDim,
    eps_c: f64,
    zeta: f64,
    lambda: f64,
    clock_ratio: f64,
    ground: Option<HermitianSpectrum>,
    excited: Excited,
}

impl Propagator {
    pub fn new(params: &ClockParams, dim: FockDim, variant: Variant) -> Result<Self> {
        params.validate()?;
        if variant == Variant::Oracle {
            return Self::oracle(&build_hamiltonian(params, dim)?);
        }
        let zeta = params.zeta();
        let excited = match variant {
            Variant::ExactDecomposition => {
                let s = squeeze_operator(zeta, dim)?.matrix;
                let s_adj = s.adjoint();
                Excited::Squeezed { s, s_adj }
            }
            Variant::DiagonalSods => Excited::Diagonal,
            Variant::Perturbative => Excited::Perturbative { a2: a_squared(dim) },
            Variant::Oracle => unreachable!(),
        };
        Ok(Self {
            variant,
            dim,
            eps_c: params.eps_c,
            zeta,
            lambda: params.lambda(),
            clock_ratio: params.omega_c_over_omega(),
            ground: None,
            excited,
        })
    }

    /// Exact decomposition with an explicit squeeze parameter in place of
    /// `ζ(ε_c)`. Only useful for checking that the oracle comparison is sensitive.
    pub fn exact_with_zeta(params: &ClockParams, dim: FockDim, zeta: f64) -> Result<Self> {
        let mut prop = Self::new(params, dim, Variant::ExactDecomposition)?;
        let s = squeeze_operator(zeta, dim)?.matrix;
        prop.zeta = zeta;
        prop.excited = Excited::Squeezed {
            s_adj: s.adjoint(),
            s,
        };
        Ok(prop)
    }

    /// Oracle factory straight from the block Hamiltonian.
    pub fn oracle(h: &BlockHamiltonian) -> Result<Self> {
        let dim = FockDim::new(h.dim())?;
        let eps_c = h.eps_c;
        Ok(Self {
            variant: Variant::Oracle,
            dim,
            eps_c,
            zeta: -(-eps_c).ln_1p() / 4.0,
            lambda: (1.0 - eps_c).sqrt(),
            clock_ratio: h.clock_offset,
            ground: Some(HermitianSpectrum::new(&h.ground)?),
            excited: Excited::Spectrum(HermitianSpectrum::new(&h.excited_rotating())?),
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn dim(&self) -> FockDim {
        self.dim
    }

    /// `ω_c t mod 2π` at dimensionless time `ωt`.
    pub fn clock_phase(&self, omega_t: f64) -> f64 {
        (self.clock_ratio * omega_t).rem_euclid(std::f64::consts::TAU)
    }

    fn oscillator_phases(&self, omega_t: f64, freq: f64) -> CVector {
        CVector::from_fn(self.dim.get(), |n, _| {
            C64::from_polar(1.0, -freq * omega_t * (n as f64 + 0.5))
        })
    }

    /// Diagonal of the number-diagonal excited branch (rotating frame).
    fn sods_phases(&self, omega_t: f64) -> CVector {
        let e = self.eps_c;
        CVector::from_fn(self.dim.get(), |n, _| {
            let x = n as f64 + 0.5;
            C64::from_polar(1.0, -omega_t * x + e * omega_t * x / 2.0)
        })
    }

    fn check_len(&self, v: &CVector) -> Result<()> {
        if v.len() != self.dim.get() {
            return Err(Error::DimensionMismatch {
                expected: self.dim.get(),
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn apply_ground(&self, omega_t: f64, v: &CVector) -> Result<CVector> {
        self.check_len(v)?;
        match &self.ground {
            Some(spec) => spec.apply(omega_t, v),
            None => Ok(v.component_mul(&self.oscillator_phases(omega_t, 1.0))),
        }
    }

    /// Excited branch in the clock-rotating frame.
    pub fn apply_excited(&self, omega_t: f64, v: &CVector) -> Result<CVector> {
        self.check_len(v)?;
        match &self.excited {
            Excited::Spectrum(spec) => spec.apply(omega_t, v),
            Excited::Squeezed { s, s_adj } => {
                let mut w = s_adj * v;
                w.component_mul_assign(&self.oscillator_phases(omega_t, self.lambda));
                Ok(s * w)
            }
            Excited::Diagonal => Ok(v.component_mul(&self.sods_phases(omega_t))),
            Excited::Perturbative { a2 } => {
                let r = self.oscillator_phases(omega_t, self.lambda);
                let rv = v.component_mul(&r);
                // R(a†² − a²)v + (a² − a†²)Rv
                let k_v = a2.ad_mul(v) - a2 * v;
                let k_rv = a2.ad_mul(&rv) - a2 * &rv;
                let corr = k_v.component_mul(&r) - k_rv;
                Ok(rv + corr * C64::new(self.eps_c / 8.0, 0.0))
            }
        }
    }

    /// Dense branch operators at `ωt`.
    pub fn at(&self, omega_t: f64) -> PropagatorSet {
        let n = self.dim.get();
        let ground = match &self.ground {
            Some(spec) => spec.propagator(omega_t),
            None => Operator::diagonal(&self.oscillator_phases(omega_t, 1.0), OperatorKind::Unitary),
        };
        let excited = match &self.excited {
            Excited::Spectrum(spec) => spec.propagator(omega_t),
            Excited::Squeezed { s, s_adj } => {
                let mut m = s.clone();
                let ph = self.oscillator_phases(omega_t, self.lambda);
                for (j, mut col) in m.column_iter_mut().enumerate() {
                    col *= ph[j];
                }
                Operator {
                    matrix: m * s_adj,
                    kind: OperatorKind::Unitary,
                }
            }
            Excited::Diagonal => {
                Operator::diagonal(&self.sods_phases(omega_t), OperatorKind::Unitary)
            }
            Excited::Perturbative { .. } => {
                let mut m = CMatrix::zeros(n, n);
                let mut e = CVector::zeros(n);
                for k in 0..n {
                    e[k] = C64::new(1.0, 0.0);
                    let col = self.apply_excited(omega_t, &e).expect("matching length");
                    m.set_column(k, &col);
                    e[k] = C64::new(0.0, 0.0);
                }
                Operator {
                    matrix: m,
                    kind: OperatorKind::General,
                }
            }
        };
        PropagatorSet {
            ground,
            excited,
            omega_t,
            variant: self.variant,
            zeta: self.zeta,
            lambda: self.lambda,
            clock_phase: self.clock_phase(omega_t),
        }
    }

    /// Evolves a composite state by `ωt`, keeping its frame.
    pub fn evolve(&self, state: &CompositeState, omega_t: f64) -> Result<CompositeState> {
        let ground = self.apply_ground(omega_t, &state.ground)?;
        let mut excited = self.apply_excited(omega_t, &state.excited)?;
        if state.frame == super::Frame::Lab {
            excited *= C64::from_polar(1.0, -self.clock_phase(omega_t));
        }
        Ok(CompositeState {
            ground,
            excited,
            frame: state.frame,
        })
    }

    /// Clock-reduced state after a Ramsey free evolution of `clock ⊗ motion`.
    pub fn ramsey_point(
        &self,
        clock: ClockSuperposition,
        motion: &CVector,
        omega_t: f64,
        frame: super::Frame,
    ) -> Result<super::ClockReducedState> {
        let initial = CompositeState::product(clock, motion, frame)?;
        Ok(super::reduce_to_clock(&self.evolve(&initial, omega_t)?))
    }
}

/// Brute-force propagator pair from the block Hamiltonian.
pub fn oracle_propagator(h: &BlockHamiltonian, omega_t: f64) -> Result<PropagatorSet> {
    Ok(Propagator::oracle(h)?.at(omega_t))
}

pub fn exact_propagator(params: &ClockParams, omega_t: f64, dim: FockDim) -> Result<PropagatorSet> {
    Ok(Propagator::new(params, dim, Variant::ExactDecomposition)?.at(omega_t))
}

pub fn diagonal_sods_propagator(
    params: &ClockParams,
    omega_t: f64,
    dim: FockDim,
) -> Result<PropagatorSet> {
    Ok(Propagator::new(params, dim, Variant::DiagonalSods)?.at(omega_t))
}

pub fn perturbative_propagator(
    params: &ClockParams,
    omega_t: f64,
    dim: FockDim,
) -> Result<PropagatorSet> {
    Ok(Propagator::new(params, dim, Variant::Perturbative)?.at(omega_t))
}
