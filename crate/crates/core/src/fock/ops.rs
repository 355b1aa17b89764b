use super::{
    hermitian_expm, CMatrix, FockDim, Operator, OperatorKind, Truncation,
};
use super::states::squeezed_required_dim;
use crate::{Error, Result, C64};

/// Annihilation and creation operators: `a[n−1, n] = √n`, `a† = a^†`.
pub fn ladder_ops(dim: FockDim) -> Result<(Operator, Operator)> {
    let n = dim.get();
    let mut a = CMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    Ok((
        Operator::new(a, OperatorKind::General)?,
        Operator::new(ad, OperatorKind::General)?,
    ))
}

pub fn number_op(dim: FockDim) -> Operator {
    let n = dim.get();
    Operator {
        matrix: CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(i as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }),
        kind: OperatorKind::Hermitian,
    }
}

/// `a²` with exact matrix elements `⟨n−2|a²|n⟩ = √(n(n−1))`.
pub fn a_squared(dim: FockDim) -> CMatrix {
    let n = dim.get();
    let mut m = CMatrix::zeros(n, n);
    for k in 2..n {
        m[(k - 2, k)] = C64::new(((k * (k - 1)) as f64).sqrt(), 0.0);
    }
    m
}

/// Position and momentum quadratures `X = (a + a†)/√2`, `P = i(a† − a)/√2`.
pub fn quadratures(dim: FockDim) -> Result<(Operator, Operator)> {
    let (a, ad) = ladder_ops(dim)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&a.matrix + &ad.matrix) * C64::new(s, 0.0);
    let p = (&ad.matrix - &a.matrix) * C64::new(0.0, s);
    Ok((
        Operator::new(x, OperatorKind::Hermitian)?,
        Operator::new(p, OperatorKind::Hermitian)?,
    ))
}

/// `P²` built from exact matrix elements rather than the product of truncated
/// quadratures, so the top diagonal entry is `(2n+1)/2` as well.
pub fn p_squared(dim: FockDim) -> Operator {
    let n = dim.get();
    let a2 = a_squared(dim);
    let mut m = (&a2 + a2.adjoint()) * C64::new(-0.5, 0.0);
    for k in 0..n {
        m[(k, k)] = C64::new(k as f64 + 0.5, 0.0);
    }
    Operator {
        matrix: m,
        kind: OperatorKind::Hermitian,
    }
}

/// `S(ξ) = exp((ξ* a² − ξ a†²)/2)`.
///
/// With `ξ = r e^{iθ}` this convention gives `S(ξ)|0⟩ ∝ Σ (−e^{iθ} tanh r)^m …|2m⟩`
/// and `e^{−iφn} S(ξ) e^{iφn} = S(ξ e^{−2iφ})`.
pub fn squeeze_operator_complex(xi: C64, dim: FockDim) -> Result<Operator> {
    squeeze_with_tol(xi, dim, Truncation::default().tol)
}

/// Real-argument squeezer `S(ζ) = exp((ζ/2)(a² − a†²))`.
pub fn squeeze_operator(zeta: f64, dim: FockDim) -> Result<Operator> {
    squeeze_operator_complex(C64::new(zeta, 0.0), dim)
}

pub(crate) fn squeeze_with_tol(xi: C64, dim: FockDim, tol: f64) -> Result<Operator> {
    if xi.norm() == 0.0 {
        return Ok(Operator::identity(dim));
    }
    let a2 = a_squared(dim);
    // generator G = (ξ* a² − ξ a†²)/2 is anti-Hermitian; exp(G) = exp(−i (iG))
    let g = (&a2 * xi.conj() - a2.adjoint() * xi) * C64::new(0.5, 0.0);
    let k = Operator {
        matrix: g * C64::new(0.0, 1.0),
        kind: OperatorKind::Hermitian,
    };
    let s = hermitian_expm(&k, 1.0)?;
    let tail: f64 = (dim.tail_start()..dim.get())
        .map(|n| s.matrix[(n, 0)].norm_sqr())
        .sum();
    if tail >= tol {
        return Err(Error::TruncationOverflow {
            dim: dim.get(),
            tail,
            tol,
            required_dim: squeezed_required_dim(xi.norm(), tol).max(dim.get() * 2),
        });
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{general_squeezed_vacuum, MotionalState};

    fn d(n: usize) -> FockDim {
        FockDim::new(n).unwrap()
    }

    #[test]
    fn ladder_small() {
        let (a, ad) = ladder_ops(d(2)).unwrap();
        assert_eq!(a.matrix[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(a.matrix[(0, 0)], C64::new(0.0, 0.0));
        assert_eq!(a.matrix[(1, 0)], C64::new(0.0, 0.0));
        assert_eq!(ad.matrix[(1, 0)], C64::new(1.0, 0.0));
        let (a4, ad4) = ladder_ops(d(4)).unwrap();
        assert!((a4.matrix[(2, 3)].re - 3f64.sqrt()).abs() < 1e-15);
        let n = &ad4.matrix * &a4.matrix;
        for k in 0..4 {
            assert!((n[(k, k)].re - k as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn quadrature_vacuum_energy() {
        for dim in [2, 3, 10] {
            let (x, p) = quadratures(d(dim)).unwrap();
            let h = Operator {
                matrix: &x.matrix * &x.matrix + &p.matrix * &p.matrix,
                kind: OperatorKind::Hermitian,
            };
            let e = h.expectation(&MotionalState::vacuum(d(dim))).unwrap();
            assert!((e.re - 1.0).abs() < 1e-14, "dim {dim}: {e}");
        }
    }

    #[test]
    fn p_squared_diagonal() {
        // ⟨5|P²|5⟩ = (2·5+1)/2, both from the product of quadratures and the exact build
        let dim = d(8);
        let (_, p) = quadratures(dim).unwrap();
        let pp = &p.matrix * &p.matrix;
        assert!((pp[(5, 5)].re - 5.5).abs() < 1e-13);
        let exact = p_squared(dim);
        assert!((exact.matrix[(5, 5)].re - 5.5).abs() < 1e-15);
        // agree everywhere except the truncated top level
        for i in 0..7 {
            for j in 0..7 {
                assert!((pp[(i, j)] - exact.matrix[(i, j)]).norm() < 1e-13);
            }
        }
        assert!((exact.matrix[(7, 7)].re - 7.5).abs() < 1e-15);
        assert!((pp[(7, 7)].re - 3.5).abs() < 1e-13);
    }

    #[test]
    fn canonical_commutator_interior() {
        let dim = d(20);
        let (x, p) = quadratures(dim).unwrap();
        let c = &x.matrix * &p.matrix - &p.matrix * &x.matrix;
        for m in 0..19 {
            for n in 0..19 {
                let expected = if m == n { C64::new(0.0, 1.0) } else { C64::new(0.0, 0.0) };
                assert!((c[(m, n)] - expected).norm() < 1e-13);
            }
        }
        // the top level is where truncation breaks [X, P] = i
        assert!((c[(19, 19)] - C64::new(0.0, 1.0)).norm() > 1.0);
    }

    #[test]
    fn squeeze_zero_is_identity() {
        let s = squeeze_operator(0.0, d(16)).unwrap();
        assert!(s.max_abs_diff(&Operator::identity(d(16))) < 1e-15);
    }

    #[test]
    fn squeeze_inverse() {
        let dim = d(128);
        let s = squeeze_operator(0.5, dim).unwrap();
        let sinv = squeeze_operator(-0.5, dim).unwrap();
        let prod = s.compose(&sinv).unwrap();
        assert!(prod.max_abs_diff(&Operator::identity(dim)) < 1e-10);
        assert!(s.unitarity_error() < 1e-10);
    }

    #[test]
    fn squeezed_photon_number() {
        let dim = d(256);
        let s = squeeze_operator(1.0, dim).unwrap();
        let psi = MotionalState::vacuum(dim).evolved(&s).unwrap();
        let n = number_op(dim).expectation(&psi).unwrap().re;
        assert!((n - 1f64.sinh().powi(2)).abs() < 1e-10);
        assert!((n - 1.3811).abs() < 1e-4);
    }

    #[test]
    fn squeeze_matches_closed_form_amplitudes() {
        let dim = d(256);
        for &(r, theta) in &[(1.0, 0.0), (0.7, 1.1), (1.2, -2.5)] {
            let xi = C64::from_polar(r, theta);
            let s = squeeze_operator_complex(xi, dim).unwrap();
            let psi = general_squeezed_vacuum(r, theta, dim).unwrap();
            let col = s.matrix.column(0);
            let dev = crate::fock::max_abs((col - &psi.amplitudes).iter());
            assert!(dev < 1e-10, "r={r} θ={theta}: {dev}");
        }
    }

    #[test]
    fn squeeze_overflow_reports_required_dim() {
        let err = squeeze_operator(2.5, d(32)).unwrap_err();
        match err {
            Error::TruncationOverflow { required_dim, dim, .. } => {
                assert_eq!(dim, 32);
                assert!(required_dim > 64);
            }
            e => panic!("unexpected {e:?}"),
        }
    }
}
