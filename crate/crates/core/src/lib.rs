//! Relativistic proper-time dynamics of a harmonically trapped two-level clock.
//!
//! The crate evolves joint clock ⊗ motion states under the mass-energy coupled
//! Hamiltonian `H = H_c + ħω(n + ½) − (ħω / 2mc²) H_c P²`, provides the analytic
//! frequency-shift and visibility formulas for vacuum, thermal and squeezed
//! motional states, and simulates the displacement-and-projection protocol that
//! exposes the phase offset linear in `ε_c`.
//!
//! Internally all times are dimensionless (`ωt`) and clock phases are tracked in
//! the frame rotating at the bare clock frequency, so that `ω_c t` never enters
//! floating-point phase arithmetic.

pub mod analysis;
pub mod closed_forms;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod protocols;
pub mod report;
pub mod tolerances;
pub mod validation;

pub use error::{Error, Result};

pub use num_complex::Complex64 as C64;

/// Wraps an angle onto the principal branch `(−π, π]`.
pub fn principal(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    if a <= -PI {
        a += TAU;
    }
    a
}

/// Argument of a complex number on `(−π, π]`.
pub fn carg(z: C64) -> f64 {
    let a = z.arg();
    if a <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}
