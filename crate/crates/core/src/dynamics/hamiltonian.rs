use super::ClockParams;
use crate::fock::{p_squared, CMatrix, FockDim, Operator, OperatorKind};
use crate::{Error, Result, C64};

/// `H = H_c + ħω(n + ½) − (ħω/2mc²) H_c P²` split into its clock blocks,
/// in units of `ħω`.
///
/// - ground: `n + ½`
/// - excited: `ω_c/ω + n + ½ − (ε_c/2) P²`
#[derive(Debug, Clone)]
pub struct BlockHamiltonian {
    pub ground: Operator,
    pub excited: Operator,
    /// `ω_c/ω`, the clock offset carried on the excited block.
    pub clock_offset: f64,
    pub eps_c: f64,
}

pub fn build_hamiltonian(params: &ClockParams, dim: FockDim) -> Result<BlockHamiltonian> {
    params.validate()?;
    if params.eps_c >= 1.0 {
        return Err(Error::UnphysicalParameters(format!(
            "eps_c={} ≥ 1",
            params.eps_c
        )));
    }
    let n = dim.get();
    let ground = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(i as f64 + 0.5, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let offset = params.omega_c_over_omega();
    let p2 = p_squared(dim);
    let mut excited = &ground - p2.matrix * C64::new(params.eps_c / 2.0, 0.0);
    for k in 0..n {
        excited[(k, k)] += C64::new(offset, 0.0);
    }
    Ok(BlockHamiltonian {
        ground: Operator::new(ground, OperatorKind::Hermitian)?,
        excited: Operator::new(excited, OperatorKind::Hermitian)?,
        clock_offset: offset,
        eps_c: params.eps_c,
    })
}

impl BlockHamiltonian {
    pub fn dim(&self) -> usize {
        self.ground.dim()
    }

    /// Excited block with the bare clock energy removed.
    pub fn excited_rotating(&self) -> Operator {
        let n = self.dim();
        let mut m = self.excited.matrix.clone();
        for k in 0..n {
            m[(k, k)] -= C64::new(self.clock_offset, 0.0);
        }
        Operator {
            matrix: m,
            kind: OperatorKind::Hermitian,
        }
    }

    /// Both blocks in joules (`ħω` times the dimensionless blocks).
    pub fn in_si(&self, params: &ClockParams) -> (Operator, Operator) {
        let scale = C64::new(super::constants::HBAR * params.omega, 0.0);
        (
            Operator {
                matrix: &self.ground.matrix * scale,
                kind: OperatorKind::Hermitian,
            },
            Operator {
                matrix: &self.excited.matrix * scale,
                kind: OperatorKind::Hermitian,
            },
        )
    }

    /// Full `2·dim` matrix in the ordering `(|g⟩ ⊗ motion, |e⟩ ⊗ motion)`.
    pub fn to_dense(&self) -> Operator {
        let n = self.dim();
        let mut m = CMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.ground.matrix);
        m.view_mut((n, n), (n, n)).copy_from(&self.excited.matrix);
        Operator {
            matrix: m,
            kind: OperatorKind::Hermitian,
        }
    }
}
