use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// CODATA 2018 exact and recommended values, SI units.
pub mod constants {
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Speed of light, m/s.
    pub const C: f64 = 299_792_458.0;
    /// Boltzmann constant, J/K.
    pub const K_B: f64 = 1.380_649e-23;
    /// Atomic mass constant, kg.
    pub const AMU: f64 = 1.660_539_066_60e-27;
}

/// Ion species with a built-in parameter preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Species {
    /// ²⁷Al⁺, clock transition at 267 nm.
    #[serde(rename = "al+")]
    AlPlus,
    /// ¹⁰B⁺ with the Al⁺ clock transition and trap (only the mass changes).
    #[serde(rename = "b+")]
    BPlus,
}

impl Species {
    pub fn mass_amu(self) -> f64 {
        match self {
            Species::AlPlus => 26.981_538_4,
            Species::BPlus => 10.012_937_0,
        }
    }

    pub fn clock_wavelength_m(self) -> f64 {
        267e-9
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "al+" | "al" | "alplus" => Some(Species::AlPlus),
            "b+" | "b" | "bplus" => Some(Species::BPlus),
            _ => None,
        }
    }
}

/// Clock and trap parameters.
///
/// `eps_c = ħω_c/mc²` and `eps_m = ħω/mc²`, tied by `eps_m ω_c = eps_c ω`.
/// In dimensionless mode `omega = 1` and `mass` is absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockParams {
    pub omega_c: f64,
    pub omega: f64,
    pub mass: Option<f64>,
    pub eps_c: f64,
    pub eps_m: f64,
}

impl ClockParams {
    /// From SI angular frequencies (rad/s) and mass (kg).
    pub fn physical(omega_c: f64, omega: f64, mass: f64) -> Result<Self> {
        use constants::{C, HBAR};
        if !(omega_c > 0.0 && omega > 0.0 && mass > 0.0) {
            return Err(Error::UnphysicalParameters(format!(
                "ω_c={omega_c}, ω={omega}, m={mass} must be positive"
            )));
        }
        let rest = mass * C * C;
        let p = Self {
            omega_c,
            omega,
            mass: Some(mass),
            eps_c: HBAR * omega_c / rest,
            eps_m: HBAR * omega / rest,
        };
        p.validate()?;
        Ok(p)
    }

    /// Species preset at trap frequency `trap_hz` (ordinary frequency, Hz).
    pub fn preset(species: Species, trap_hz: f64) -> Result<Self> {
        use std::f64::consts::TAU;
        let omega_c = TAU * constants::C / species.clock_wavelength_m();
        Self::physical(
            omega_c,
            TAU * trap_hz,
            species.mass_amu() * constants::AMU,
        )
    }

    /// Dimensionless parameters with `ω = 1` and `ω_c = eps_c / eps_m`.
    pub fn dimensionless(eps_c: f64, eps_m: f64) -> Result<Self> {
        if !(eps_m > 0.0) {
            return Err(Error::UnphysicalParameters(format!(
                "eps_m={eps_m} must be positive to fix ω_c/ω"
            )));
        }
        let p = Self {
            omega_c: eps_c / eps_m,
            omega: 1.0,
            mass: None,
            eps_c,
            eps_m,
        };
        p.validate()?;
        Ok(p)
    }

    /// Dimensionless parameters from `eps_c` and the ratio `ω_c/ω`.
    pub fn with_ratio(eps_c: f64, omega_c_over_omega: f64) -> Result<Self> {
        if !(omega_c_over_omega >= 1.0) || !omega_c_over_omega.is_finite() {
            return Err(Error::UnphysicalParameters(format!(
                "ω_c/ω = {omega_c_over_omega} must be finite and ≥ 1"
            )));
        }
        let p = Self {
            omega_c: omega_c_over_omega,
            omega: 1.0,
            mass: None,
            eps_c,
            eps_m: eps_c / omega_c_over_omega,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::UnphysicalParameters(m));
        if !(self.eps_c >= 0.0 && self.eps_c < 1.0) {
            return bad(format!("eps_c={} outside [0, 1)", self.eps_c));
        }
        if !(self.eps_m >= 0.0) || self.eps_m > self.eps_c {
            return bad(format!(
                "eps_m={} must lie in [0, eps_c={}]",
                self.eps_m, self.eps_c
            ));
        }
        if !(self.omega > 0.0 && self.omega_c > 0.0) {
            return bad(format!("ω={} and ω_c={} must be positive", self.omega, self.omega_c));
        }
        let lhs = self.eps_m * self.omega_c;
        let rhs = self.eps_c * self.omega;
        let scale = lhs.abs().max(rhs.abs());
        if scale > 0.0 && (lhs - rhs).abs() > 1e-12 * scale {
            return bad(format!("eps_m ω_c = {lhs:e} differs from eps_c ω = {rhs:e}"));
        }
        Ok(())
    }

    pub fn omega_c_over_omega(&self) -> f64 {
        self.omega_c / self.omega
    }

    /// Squeeze parameter of the excited-branch decomposition, `−ln(1−ε_c)/4`.
    pub fn zeta(&self) -> f64 {
        -(-self.eps_c).ln_1p() / 4.0
    }

    /// Excited-branch frequency scale `√(1−ε_c)`.
    pub fn lambda(&self) -> f64 {
        (1.0 - self.eps_c).sqrt()
    }

    /// `ε_m ω_c t = ε_c ω t` for a duration in seconds (physical) or trap units.
    pub fn theta(&self, t: f64) -> f64 {
        self.eps_m * self.omega_c * t
    }

    /// Bare clock phase `ω_c t mod 2π` for dimensionless time `ωt`.
    pub fn clock_phase_mod(&self, omega_t: f64) -> f64 {
        (self.omega_c_over_omega() * omega_t).rem_euclid(std::f64::consts::TAU)
    }

    /// Same parameters with the mass replaced, keeping ω_c and ω ("all else equal").
    pub fn with_mass(&self, mass: f64) -> Result<Self> {
        Self::physical(self.omega_c, self.omega, mass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn al_preset_matches_quoted_values() {
        let p = ClockParams::preset(Species::AlPlus, 20e6).unwrap();
        // three significant figures: 3.29e-18 and 1.85e-10
        assert!((p.eps_m / 1e-18 * 100.0).round() == 329.0, "{}", p.eps_m);
        assert!((p.eps_c / 1e-10 * 100.0).round() == 185.0, "{}", p.eps_c);
        p.validate().unwrap();
    }

    #[test]
    fn b_preset_scales_with_mass() {
        let al = ClockParams::preset(Species::AlPlus, 20e6).unwrap();
        let b = ClockParams::preset(Species::BPlus, 20e6).unwrap();
        let ratio = b.eps_m / al.eps_m;
        assert!((ratio - 26.981_538_4 / 10.012_937).abs() < 1e-12);
        assert_eq!(al.omega_c, b.omega_c);
    }

    #[test]
    fn identity_holds_for_constructors() {
        for p in [
            ClockParams::with_ratio(0.1, 100.0).unwrap(),
            ClockParams::dimensionless(1e-3, 1e-7).unwrap(),
            ClockParams::preset(Species::BPlus, 1e6).unwrap(),
        ] {
            let lhs = p.eps_m * p.omega_c;
            let rhs = p.eps_c * p.omega;
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()));
        }
    }

    #[test]
    fn rejects_unphysical() {
        assert!(ClockParams::with_ratio(1.0, 10.0).is_err());
        assert!(ClockParams::with_ratio(-0.1, 10.0).is_err());
        assert!(ClockParams::with_ratio(0.1, 0.5).is_err());
        assert!(ClockParams::dimensionless(1e-3, 1e-2).is_err());
        assert!(ClockParams::dimensionless(1e-3, 0.0).is_err());
    }

    #[test]
    fn derived_scalars() {
        let p = ClockParams::with_ratio(0.1, 100.0).unwrap();
        assert!((p.zeta() - 0.026_340_127).abs() < 1e-8);
        assert!((p.zeta() + 0.9f64.ln() / 4.0).abs() < 1e-16);
        assert!((p.lambda() - 0.9f64.sqrt()).abs() < 1e-16);
    }
}
