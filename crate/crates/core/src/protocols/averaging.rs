use std::f64::consts::TAU;

use crate::analysis::least_squares;
use crate::{Error, Result};

/// Minimum samples per trap period for [`time_average_phase`].
pub const MIN_SAMPLES_PER_PERIOD: usize = 32;

/// Constant part of a phase series over `window_periods` trap periods.
///
/// The series must be uniformly sampled with at least 32 samples per period,
/// starting at its first sample and with the window's endpoint excluded. The
/// secular slope is estimated jointly with the `cos 2ωt`, `sin 2ωt` harmonics
/// (a bare line fit would leak the oscillation into the slope), removed, and
/// the remainder averaged: oscillating terms cancel and a `sin²ωt` term
/// contributes half its amplitude.
pub fn time_average_phase(omega_t: &[f64], phase: &[f64], window_periods: usize) -> Result<f64> {
    if omega_t.len() != phase.len() {
        return Err(Error::GridMismatch(format!(
            "{} times for {} phases",
            omega_t.len(),
            phase.len()
        )));
    }
    if window_periods == 0 || omega_t.len() < 2 {
        return Err(Error::InsufficientData(
            "averaging needs a positive window and at least two samples".into(),
        ));
    }
    let step = omega_t[1] - omega_t[0];
    let span = TAU * window_periods as f64;
    let m = (span / step).round();
    if !(step > 0.0) || (m * step - span).abs() > 1e-9 * span {
        return Err(Error::InsufficientData(format!(
            "step {step} does not divide {window_periods} trap periods"
        )));
    }
    let m = m as usize;
    if m > omega_t.len() {
        return Err(Error::InsufficientData(format!(
            "window needs {m} samples, series has {}",
            omega_t.len()
        )));
    }
    if m < MIN_SAMPLES_PER_PERIOD * window_periods {
        return Err(Error::InsufficientData(format!(
            "{} samples per period, at least {MIN_SAMPLES_PER_PERIOD} required",
            m / window_periods
        )));
    }
    let t = &omega_t[..m];
    let y = &phase[..m];
    for (i, w) in t.windows(2).enumerate() {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * step.max(1.0) {
            return Err(Error::InsufficientData(format!("nonuniform step at sample {}", i + 1)));
        }
    }
    let cols = vec![
        vec![1.0; m],
        t.to_vec(),
        t.iter().map(|x| (2.0 * x).cos()).collect(),
        t.iter().map(|x| (2.0 * x).sin()).collect(),
    ];
    let coef = least_squares(&cols, y)?;
    let slope = coef[1];
    Ok(t.iter().zip(y).map(|(x, v)| v - slope * x).sum::<f64>() / m as f64)
}
