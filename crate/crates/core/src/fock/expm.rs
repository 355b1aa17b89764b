use nalgebra::linalg::SymmetricEigen;
use nalgebra::DVector;

use super::{CMatrix, CVector, Operator, OperatorKind, HERMITIAN_TOL};
use crate::{Error, Result, C64};

/// Eigendecomposition `H = V Λ V†` of a Hermitian operator, reusable for
/// propagators `exp(−iHt)` at many times.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

impl HermitianSpectrum {
    pub fn new(h: &Operator) -> Result<Self> {
        if h.kind != OperatorKind::Hermitian {
            return Err(Error::InvalidOperator(format!(
                "expected a hermitian operator, got {:?}",
                h.kind
            )));
        }
        let err = h.hermiticity_error();
        if err > HERMITIAN_TOL {
            return Err(Error::InvalidOperator(format!(
                "hermiticity error {err:.3e} exceeds {HERMITIAN_TOL:.0e}"
            )));
        }
        // symmetrize so the solver sees an exactly Hermitian matrix
        let sym = (&h.matrix + h.matrix.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        Ok(Self {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    fn phases(&self, t: f64) -> CVector {
        self.values.map(|l| C64::from_polar(1.0, -l * t))
    }

    /// `exp(−iHt)` as a dense unitary operator.
    pub fn propagator(&self, t: f64) -> Operator {
        let phases = self.phases(t);
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        Operator {
            matrix: scaled * self.vectors.adjoint(),
            kind: OperatorKind::Unitary,
        }
    }

    /// `exp(−iHt) ψ` without forming the dense propagator.
    pub fn apply(&self, t: f64, psi: &CVector) -> Result<CVector> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.len(),
            });
        }
        let mut coeffs = self.vectors.ad_mul(psi);
        let phases = self.phases(t);
        coeffs.component_mul_assign(&phases);
        Ok(&self.vectors * coeffs)
    }
}

/// `exp(−iHt)` for a Hermitian operator `H`, by eigendecomposition.
pub fn hermitian_expm(h: &Operator, t: f64) -> Result<Operator> {
    Ok(HermitianSpectrum::new(h)?.propagator(t))
}
