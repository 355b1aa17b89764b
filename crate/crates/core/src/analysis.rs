//! Phase unwrapping, shift fitting, scaling exponents and comparison reports.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dynamics::ClockParams;
use crate::{principal, Error, Result, C64};

/// Unwraps principal-branch phases with the default step limit of π.
pub fn unwrap_phase(phases: &[f64]) -> Result<Vec<f64>> {
    unwrap_phase_with_limit(phases, std::f64::consts::PI)
}

/// Unwraps a series, failing when a wrapped step reaches `limit` in magnitude.
///
/// A step exactly at π is ambiguous for principal-branch input, so `limit = π`
/// only rejects that case; callers that want to catch coarse grids pass a
/// smaller limit.
pub fn unwrap_phase_with_limit(phases: &[f64], limit: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(phases.len());
    let Some(&first) = phases.first() else {
        return Ok(out);
    };
    out.push(first);
    let mut acc = first;
    for i in 1..phases.len() {
        let step = principal(phases[i] - phases[i - 1]);
        if step.abs() >= limit {
            return Err(Error::UnwrapFailure {
                index: i,
                step,
                limit,
            });
        }
        acc += step;
        out.push(acc);
    }
    Ok(out)
}

/// Least-squares line through a phase series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// rad per unit `ωt`.
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    /// `slope · ω/ω_c`; negative is a redshift.
    pub fractional_shift: f64,
}

/// Fits `φ(ωt) = intercept + slope·ωt` and converts the slope to `Δν/ν`.
///
/// `phases` must be unwrapped and use the extra-clock-phase convention
/// `2ρ_eg = V e^{−i(ω_c t + φ)}`.
pub fn fit_fractional_shift(omega_t: &[f64], phases: &[f64], params: &ClockParams) -> Result<FitResult> {
    let (slope, intercept, residual_rms) = fit_line(omega_t, phases)?;
    Ok(FitResult {
        slope,
        intercept,
        residual_rms,
        fractional_shift: slope / params.omega_c_over_omega(),
    })
}

/// Ordinary least squares on centered data: `(slope, intercept, rms residual)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::GridMismatch(format!(
            "{} abscissae for {} values",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "a line fit needs at least 3 points, got {}",
            x.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - intercept - slope * xi).powi(2))
        .sum();
    Ok((slope, intercept, (ss / n).sqrt()))
}

/// General least squares `min ‖A c − y‖` by SVD; `columns` are the basis
/// functions sampled on the grid.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let m = y.len();
    let k = columns.len();
    if k == 0 || m < k {
        return Err(Error::InsufficientData(format!(
            "{m} samples for {k} basis functions"
        )));
    }
    if let Some(c) = columns.iter().find(|c| c.len() != m) {
        return Err(Error::GridMismatch(format!(
            "basis column of length {} for {m} samples",
            c.len()
        )));
    }
    let a = DMatrix::from_fn(m, k, |i, j| columns[j][i]);
    let b = DVector::from_column_slice(y);
    let svd = a.svd(true, true);
    let sol = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::InsufficientData(e.to_string()))?;
    Ok(sol.iter().copied().collect())
}

/// Power `k` in `metric ∝ ε^k` from two points.
pub fn scaling_exponent(eps1: f64, metric1: f64, eps2: f64, metric2: f64) -> Result<f64> {
    for m in [metric1, metric2] {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::NonpositiveMetric(m));
        }
    }
    if !(eps1 > 0.0 && eps2 > 0.0) || eps1 == eps2 {
        return Err(Error::InsufficientData(format!(
            "scaling needs two distinct positive parameters, got {eps1} and {eps2}"
        )));
    }
    Ok((metric1 / metric2).ln() / (eps1 / eps2).ln())
}

/// Acceptance rule for [`compare_report`]: a point passes if it meets either bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareTolerance {
    pub abs: Option<f64>,
    pub rel: Option<f64>,
}

impl CompareTolerance {
    pub fn absolute(abs: f64) -> Self {
        Self {
            abs: Some(abs),
            rel: None,
        }
    }

    pub fn relative(rel: f64) -> Self {
        Self {
            abs: None,
            rel: Some(rel),
        }
    }

    fn accepts(&self, abs_dev: f64, rel_dev: f64) -> bool {
        self.abs.is_some_and(|t| abs_dev <= t) || self.rel.is_some_and(|t| rel_dev <= t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointDeviation {
    pub x: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub pass: bool,
}

/// Point-by-point deviations between a numeric and a reference series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub label: String,
    pub tolerance: CompareTolerance,
    pub points: Vec<PointDeviation>,
    pub max_abs: f64,
    pub rms_abs: f64,
    pub max_rel: f64,
    pub pass: bool,
}

impl CompareReport {
    pub fn failures(&self) -> impl Iterator<Item = &PointDeviation> {
        self.points.iter().filter(|p| !p.pass)
    }
}

fn check_grids(xa: &[f64], xb: &[f64], na: usize, nb: usize) -> Result<()> {
    if xa.len() != na || xb.len() != nb {
        return Err(Error::GridMismatch("grid and value lengths differ".into()));
    }
    if xa.len() != xb.len() {
        return Err(Error::GridMismatch(format!(
            "{} vs {} points",
            xa.len(),
            xb.len()
        )));
    }
    for (i, (a, b)) in xa.iter().zip(xb).enumerate() {
        if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
            return Err(Error::GridMismatch(format!("point {i}: {a} vs {b}")));
        }
    }
    Ok(())
}

fn build_report(
    label: &str,
    grid: &[f64],
    devs: impl Iterator<Item = (f64, f64)>,
    tolerance: CompareTolerance,
) -> CompareReport {
    let points: Vec<PointDeviation> = grid
        .iter()
        .zip(devs)
        .map(|(&x, (abs_dev, scale))| {
            let rel_dev = if scale > 0.0 {
                abs_dev / scale
            } else if abs_dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            PointDeviation {
                x,
                abs_dev,
                rel_dev,
                pass: tolerance.accepts(abs_dev, rel_dev),
            }
        })
        .collect();
    let n = points.len().max(1) as f64;
    let max_abs = points.iter().map(|p| p.abs_dev).fold(0.0, f64::max);
    let max_rel = points.iter().map(|p| p.rel_dev).fold(0.0, f64::max);
    let rms_abs = (points.iter().map(|p| p.abs_dev * p.abs_dev).sum::<f64>() / n).sqrt();
    CompareReport {
        label: label.to_string(),
        tolerance,
        pass: points.iter().all(|p| p.pass),
        points,
        max_abs,
        rms_abs,
        max_rel,
    }
}

/// Compares real series on aligned grids; relative deviations are taken
/// against the reference magnitude.
pub fn compare_report(
    label: &str,
    numeric: (&[f64], &[f64]),
    reference: (&[f64], &[f64]),
    tolerance: CompareTolerance,
) -> Result<CompareReport> {
    check_grids(numeric.0, reference.0, numeric.1.len(), reference.1.len())?;
    let devs = numeric
        .1
        .iter()
        .zip(reference.1)
        .map(|(a, b)| ((a - b).abs(), b.abs()));
    Ok(build_report(label, numeric.0, devs, tolerance))
}

/// Complex version of [`compare_report`] using `|a − b|`.
pub fn compare_report_complex(
    label: &str,
    numeric: (&[f64], &[C64]),
    reference: (&[f64], &[C64]),
    tolerance: CompareTolerance,
) -> Result<CompareReport> {
    check_grids(numeric.0, reference.0, numeric.1.len(), reference.1.len())?;
    let devs = numeric
        .1
        .iter()
        .zip(reference.1)
        .map(|(a, b)| ((a - b).norm(), b.norm()));
    Ok(build_report(label, numeric.0, devs, tolerance))
}
