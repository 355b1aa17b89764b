use super::{CMatrix, CVector, FockDim, Operator, Truncation, NORM_TOL};
use crate::{Error, Result, C64};

/// Pure motional state in the Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionalState {
    pub amplitudes: CVector,
    /// Norm² carried by the top 10% of levels.
    pub tail_norm: f64,
}

fn tail_weight(v: &CVector) -> f64 {
    let dim = FockDim(v.len());
    (dim.tail_start()..v.len()).map(|n| v[n].norm_sqr()).sum()
}

impl MotionalState {
    /// Validates normalization (to `NORM_TOL`) and records the tail weight.
    pub fn from_amplitudes(amplitudes: CVector) -> Result<Self> {
        FockDim::new(amplitudes.len())?;
        let norm2 = amplitudes.norm_squared();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidOperator(format!(
                "state norm² {norm2} differs from 1"
            )));
        }
        let tail_norm = tail_weight(&amplitudes);
        Ok(Self {
            amplitudes,
            tail_norm,
        })
    }

    /// Rescales to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        FockDim::new(amplitudes.len())?;
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidOperator("zero or non-finite state".into()));
        }
        Self::from_amplitudes(amplitudes.unscale(norm))
    }

    pub fn vacuum(dim: FockDim) -> Self {
        Self::fock(0, dim).expect("level 0 always fits")
    }

    pub fn fock(k: usize, dim: FockDim) -> Result<Self> {
        if k >= dim.get() {
            return Err(Error::TruncationOverflow {
                dim: dim.get(),
                tail: 1.0,
                tol: 0.0,
                required_dim: k + 1,
            });
        }
        let mut v = CVector::zeros(dim.get());
        v[k] = C64::new(1.0, 0.0);
        Ok(Self::from_amplitudes(v)?)
    }

    pub fn dim(&self) -> FockDim {
        FockDim(self.amplitudes.len())
    }

    pub fn is_converged(&self, truncation: &Truncation) -> bool {
        self.tail_norm < truncation.tol
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &MotionalState) -> Result<C64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                got: other.amplitudes.len(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Applies an operator without renormalizing.
    pub fn evolved(&self, op: &Operator) -> Result<Self> {
        let v = op.apply(&self.amplitudes)?;
        let tail_norm = tail_weight(&v);
        Ok(Self {
            amplitudes: v,
            tail_norm,
        })
    }

    /// Zero-pads (or fails to shrink) onto another dimension.
    pub fn embedded(&self, dim: FockDim) -> Result<Self> {
        let n = self.amplitudes.len();
        if dim.get() < n {
            let dropped: f64 = (dim.get()..n).map(|k| self.amplitudes[k].norm_sqr()).sum();
            if dropped > 0.0 {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: dim.get(),
                });
            }
        }
        let mut v = CVector::zeros(dim.get());
        for k in 0..n.min(dim.get()) {
            v[k] = self.amplitudes[k];
        }
        let tail_norm = tail_weight(&v);
        Ok(Self {
            amplitudes: v,
            tail_norm,
        })
    }
}

/// Mixed motional state.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionalDensity {
    pub matrix: CMatrix,
    /// Probability weight that was cut off by truncation before renormalizing.
    pub discarded_tail: f64,
}

impl MotionalDensity {
    pub fn from_pure(psi: &MotionalState) -> Self {
        Self {
            matrix: &psi.amplitudes * psi.amplitudes.adjoint(),
            discarded_tail: 0.0,
        }
    }

    pub fn dim(&self) -> FockDim {
        FockDim(self.matrix.nrows())
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.matrix.nrows();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].norm() == 0.0))
    }

    /// Diagonal populations, `ρ_kk`.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.matrix.nrows()).map(|k| self.matrix[(k, k)].re).collect()
    }

    /// Checks Hermiticity (1e-12), unit trace (1e-12) and positivity (−1e-10).
    pub fn validate(&self) -> Result<()> {
        let op = Operator {
            matrix: self.matrix.clone(),
            kind: super::OperatorKind::Hermitian,
        };
        let herm = op.hermiticity_error();
        if herm > 1e-12 {
            return Err(Error::InvalidOperator(format!("density not Hermitian: {herm:.3e}")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::InvalidOperator(format!("density trace {tr}")));
        }
        let sym = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let min_eig = nalgebra::linalg::SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::InvalidOperator(format!(
                "density has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        if op.dim() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                got: op.dim(),
            });
        }
        Ok((&self.matrix * &op.matrix).trace())
    }
}

/// Smallest dimension whose top-10% window of `S(r)|0⟩` drops below `tol`.
pub(crate) fn squeezed_required_dim(r: f64, tol: f64) -> usize {
    let q = r.tanh().powi(2);
    if q <= 0.0 {
        return 2;
    }
    // weight of pair-level m scales like q^m / sqrt(m); q^m alone is a safe bound
    let m = (tol.ln() / q.ln()).ceil().max(1.0);
    ((2.0 * m) / 0.9).ceil() as usize + 2
}

/// Squeezed vacuum `S(ξ)|0⟩` with `ξ = r e^{iθ}` (convention of
/// [`squeeze_operator_complex`](super::squeeze_operator_complex)), from the
/// closed-form amplitudes
/// `c_{2m} = (−e^{iθ} tanh r)^m √((2m)!) / (2^m m! √cosh r)`.
///
/// Amplitudes are renormalized over the kept levels.
pub fn general_squeezed_vacuum(r: f64, theta: f64, dim: FockDim) -> Result<MotionalState> {
    squeezed_vacuum_with_tol(r, theta, dim, Truncation::default().tol)
}

pub fn squeezed_vacuum_with_tol(
    r: f64,
    theta: f64,
    dim: FockDim,
    tol: f64,
) -> Result<MotionalState> {
    if !(r >= 0.0) || !r.is_finite() || !theta.is_finite() {
        return Err(Error::UnphysicalParameters(format!(
            "squeezing parameters r={r}, θ={theta}"
        )));
    }
    let n = dim.get();
    let mut v = CVector::zeros(n);
    let ratio = -C64::from_polar(r.tanh(), theta);
    let mut c = C64::new(1.0 / r.cosh().sqrt(), 0.0);
    let mut k = 0usize;
    while k < n {
        v[k] = c;
        let m = (k / 2) as f64;
        c *= ratio * ((2.0 * m + 1.0) / (2.0 * m + 2.0)).sqrt();
        k += 2;
    }
    let state = MotionalState::normalized(v)?;
    if state.tail_norm >= tol {
        return Err(Error::TruncationOverflow {
            dim: n,
            tail: state.tail_norm,
            tol,
            required_dim: squeezed_required_dim(r, tol).max(2 * n),
        });
    }
    Ok(state)
}

/// Thermal state `ρ = Σ_k (1+n̄)⁻¹ (n̄/(1+n̄))^k |k⟩⟨k|` on the kept levels,
/// renormalized; the cut weight `(n̄/(1+n̄))^dim` is reported.
pub fn thermal_density(nbar: f64, dim: FockDim) -> Result<MotionalDensity> {
    thermal_density_with_tol(nbar, dim, Truncation::default().tol)
}

pub fn thermal_density_with_tol(
    nbar: f64,
    dim: FockDim,
    tol: f64,
) -> Result<MotionalDensity> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::UnphysicalParameters(format!("mean occupation {nbar}")));
    }
    let n = dim.get();
    let q = nbar / (1.0 + nbar);
    let discarded = q.powi(n as i32);
    if discarded >= tol {
        let required = (tol.ln() / q.ln()).ceil() as usize + 1;
        return Err(Error::TruncationOverflow {
            dim: n,
            tail: discarded,
            tol,
            required_dim: required,
        });
    }
    let mut weights: Vec<f64> = Vec::with_capacity(n);
    let mut w = 1.0 / (1.0 + nbar);
    for _ in 0..n {
        weights.push(w);
        w *= q;
    }
    let total: f64 = weights.iter().sum();
    let mut m = CMatrix::zeros(n, n);
    for (k, wk) in weights.iter().enumerate() {
        m[(k, k)] = C64::new(wk / total, 0.0);
    }
    Ok(MotionalDensity {
        matrix: m,
        discarded_tail: discarded,
    })
}

/// `⟨r|r e^{iφ}⟩ = (cosh²r − e^{iφ} sinh²r)^{−1/2}` on the principal branch.
pub fn squeezed_overlap_closed_form(r: f64, phi: f64) -> C64 {
    let (c, s) = (r.cosh(), r.sinh());
    let z = C64::new(c * c, 0.0) - C64::from_polar(s * s, phi);
    z.sqrt().inv()
}
