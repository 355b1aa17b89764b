//! Truncated bosonic Fock-space algebra.
//!
//! Every operator lives on the levels `0..dim`. Truncation is tracked through
//! the weight a state carries in the top tenth of the kept levels; a state is
//! considered converged when that weight is below [`Truncation::tol`].

mod expm;
pub mod fixture;
mod ops;
mod states;

pub use expm::{hermitian_expm, HermitianSpectrum};
pub use ops::{
    a_squared, ladder_ops, number_op, p_squared, quadratures, squeeze_operator,
    squeeze_operator_complex,
};
pub use states::{
    general_squeezed_vacuum, squeezed_overlap_closed_form, squeezed_vacuum_with_tol,
    thermal_density, thermal_density_with_tol, MotionalDensity, MotionalState,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Hermiticity tolerance for hermitian-kind operators.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Unitarity tolerance for unitary-kind operators.
pub const UNITARY_TOL: f64 = 1e-10;
/// Normalization tolerance for states.
pub const NORM_TOL: f64 = 1e-12;

/// Number of retained Fock levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockDim(usize);

impl FockDim {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self(dim))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn doubled(self) -> Self {
        Self(self.0 * 2)
    }

    /// First level of the "tail" window (top 10% of levels, at least one level).
    pub fn tail_start(self) -> usize {
        let width = (self.0 + 9) / 10;
        self.0 - width.max(1)
    }
}

impl std::fmt::Display for FockDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Adaptive truncation policy: start at `start_dim`, double until every
/// prepared state has tail weight below `tol`, never exceeding `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub tol: f64,
    pub start_dim: usize,
    pub cap: usize,
}

pub const DIM_CAP_ENV: &str = "PROPERTIME_DIM_CAP";
const DEFAULT_DIM_CAP: usize = 4096;

impl Default for Truncation {
    fn default() -> Self {
        let cap = std::env::var(DIM_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .unwrap_or(DEFAULT_DIM_CAP);
        Self {
            tol: 1e-12,
            start_dim: 128,
            cap,
        }
    }
}

impl Truncation {
    /// Runs `prepare` at increasing dimensions until the reported tail weight
    /// drops below tolerance. Truncation-overflow errors from `prepare` trigger
    /// another doubling; any other error is returned immediately.
    pub fn adapt<T>(
        &self,
        mut prepare: impl FnMut(FockDim) -> Result<T>,
        tail: impl Fn(&T) -> f64,
    ) -> Result<(FockDim, T)> {
        let mut dim = FockDim::new(self.start_dim.min(self.cap.max(2)))?;
        loop {
            let (t, required) = match prepare(dim) {
                Ok(value) => {
                    let t = tail(&value);
                    if t < self.tol {
                        return Ok((dim, value));
                    }
                    (t, dim.get() * 2)
                }
                Err(Error::TruncationOverflow {
                    tail, required_dim, ..
                }) => (tail, required_dim.max(dim.get() * 2)),
                Err(e) => return Err(e),
            };
            if dim.get() * 2 > self.cap {
                return Err(Error::TruncationOverflow {
                    dim: dim.get(),
                    tail: t,
                    tol: self.tol,
                    required_dim: required,
                });
            }
            dim = dim.doubled();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Hermitian,
    Unitary,
    General,
}

/// Square complex matrix on a truncated Fock space, tagged with its kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub matrix: CMatrix,
    pub kind: OperatorKind,
}

impl Operator {
    pub fn new(matrix: CMatrix, kind: OperatorKind) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidOperator(format!(
                "non-square {}x{} matrix",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() < 2 {
            return Err(Error::InvalidDimension(matrix.nrows()));
        }
        Ok(Self { matrix, kind })
    }

    pub fn identity(dim: FockDim) -> Self {
        Self {
            matrix: CMatrix::identity(dim.get(), dim.get()),
            kind: OperatorKind::Unitary,
        }
    }

    pub fn zeros(dim: FockDim) -> Self {
        Self {
            matrix: CMatrix::zeros(dim.get(), dim.get()),
            kind: OperatorKind::Hermitian,
        }
    }

    pub fn diagonal(diag: &CVector, kind: OperatorKind) -> Self {
        Self {
            matrix: CMatrix::from_diagonal(diag),
            kind,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            kind: self.kind,
        }
    }

    /// `max |A − A†|`, scaled to the largest entry when that exceeds 1.
    pub fn hermiticity_error(&self) -> f64 {
        let scale = self.matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            / scale
    }

    /// `max |U†U − I|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let prod = self.matrix.adjoint() * &self.matrix;
        (prod - CMatrix::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Verifies the kind tag against the matrix.
    pub fn check(&self) -> Result<()> {
        match self.kind {
            OperatorKind::Hermitian => {
                let err = self.hermiticity_error();
                if err > HERMITIAN_TOL {
                    return Err(Error::InvalidOperator(format!(
                        "hermiticity error {err:.3e}"
                    )));
                }
            }
            OperatorKind::Unitary => {
                let err = self.unitarity_error();
                if err > UNITARY_TOL {
                    return Err(Error::InvalidOperator(format!("unitarity error {err:.3e}")));
                }
            }
            OperatorKind::General => {}
        }
        Ok(())
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(&self.matrix * v)
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &MotionalState) -> Result<C64> {
        let av = self.apply(&psi.amplitudes)?;
        Ok(psi.amplitudes.dotc(&av))
    }

    /// Product with the kind inferred from the operands (unitary × unitary stays unitary).
    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        if rhs.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: rhs.dim(),
            });
        }
        let kind = if self.kind == OperatorKind::Unitary && rhs.kind == OperatorKind::Unitary {
            OperatorKind::Unitary
        } else {
            OperatorKind::General
        };
        Ok(Self {
            matrix: &self.matrix * &rhs.matrix,
            kind,
        })
    }

    /// Largest entry-wise deviation between two operators.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_check() {
        assert_eq!(FockDim::new(1), Err(Error::InvalidDimension(1)));
        assert_eq!(FockDim::new(0), Err(Error::InvalidDimension(0)));
        assert_eq!(FockDim::new(2).unwrap().get(), 2);
    }

    #[test]
    fn tail_window() {
        assert_eq!(FockDim::new(128).unwrap().tail_start(), 115);
        assert_eq!(FockDim::new(10).unwrap().tail_start(), 9);
        assert_eq!(FockDim::new(2).unwrap().tail_start(), 1);
    }

    #[test]
    fn adaptive_doubling_stops_at_converged_dim() {
        let policy = Truncation {
            tol: 1e-12,
            start_dim: 8,
            cap: 1024,
        };
        // geometric tail q^n with q = 0.8 needs about 124 levels below 1e-12
        let (dim, _) = policy
            .adapt(
                |d| Ok(d),
                |d| 0.8f64.powi(d.tail_start() as i32),
            )
            .unwrap();
        assert_eq!(dim.get(), 256);
    }

    #[test]
    fn adaptive_cap_reports_overflow() {
        let policy = Truncation {
            tol: 1e-12,
            start_dim: 8,
            cap: 64,
        };
        let err = policy
            .adapt(|d| Ok(d), |d| 0.99f64.powi(d.tail_start() as i32))
            .unwrap_err();
        assert!(matches!(err, Error::TruncationOverflow { dim: 64, .. }));
    }
}

/// Largest modulus among complex entries.
pub fn max_abs<'a>(entries: impl IntoIterator<Item = &'a C64>) -> f64 {
    entries.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}
