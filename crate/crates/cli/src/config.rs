//! TOML run configurations. Every table rejects unknown keys.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use propertime::dynamics::{ClockParams, Species, Variant};
use propertime::fock::{FockDim, Truncation};
use propertime::protocols::{MotionalPrep, Projector, QsodsConfig, RamseyConfig};

use crate::CliError;

/// `[params]`: a species preset or explicit dimensionless couplings, never both.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub preset: Option<Species>,
    pub trap_mhz: Option<f64>,
    pub eps_c: Option<f64>,
    pub eps_m: Option<f64>,
    pub omega_c_over_omega: Option<f64>,
}

pub const DEFAULT_TRAP_MHZ: f64 = 20.0;

impl ParamSpec {
    fn explicit(&self) -> bool {
        self.eps_c.is_some() || self.eps_m.is_some() || self.omega_c_over_omega.is_some()
    }

    fn check_source(&self) -> Result<(), CliError> {
        if self.preset.is_some() && self.explicit() {
            return Err(CliError::usage(
                "give either a preset or explicit eps_c/eps_m, not both",
            ));
        }
        if self.preset.is_none() && self.trap_mhz.is_some() {
            return Err(CliError::usage("trap frequency only applies to a preset"));
        }
        if self.eps_m.is_some() && self.omega_c_over_omega.is_some() {
            return Err(CliError::usage("give eps_m or omega_c_over_omega, not both"));
        }
        Ok(())
    }

    /// Full parameter set; explicit input needs `eps_c` and one of `eps_m`,
    /// `omega_c_over_omega`.
    pub fn resolve(&self) -> Result<ClockParams, CliError> {
        self.check_source()?;
        if let Some(species) = self.preset {
            let mhz = self.trap_mhz.unwrap_or(DEFAULT_TRAP_MHZ);
            return Ok(ClockParams::preset(species, mhz * 1e6)?);
        }
        let eps_c = self
            .eps_c
            .ok_or_else(|| CliError::usage("missing parameter source: preset or eps_c"))?;
        match (self.eps_m, self.omega_c_over_omega) {
            (Some(m), None) => Ok(ClockParams::dimensionless(eps_c, m)?),
            (None, Some(ratio)) => Ok(ClockParams::with_ratio(eps_c, ratio)?),
            _ => Err(CliError::usage("eps_c needs eps_m or omega_c_over_omega")),
        }
    }

    /// `ε_c` alone, for formulas that need nothing else.
    pub fn eps_c(&self) -> Result<f64, CliError> {
        self.check_source()?;
        if self.preset.is_some() {
            return Ok(self.resolve()?.eps_c);
        }
        let eps_c = self
            .eps_c
            .ok_or_else(|| CliError::usage("missing parameter source: preset or eps_c"))?;
        if !(0.0..1.0).contains(&eps_c) {
            return Err(propertime::Error::UnphysicalParameters(format!(
                "eps_c={eps_c} outside [0, 1)"
            ))
            .into());
        }
        Ok(eps_c)
    }

    /// `ε_m` alone: from a preset, or given explicitly.
    pub fn eps_m(&self) -> Result<f64, CliError> {
        self.check_source()?;
        if self.preset.is_some() || self.eps_c.is_some() {
            return Ok(self.resolve()?.eps_m);
        }
        let eps_m = self
            .eps_m
            .ok_or_else(|| CliError::usage("missing parameter source: preset or eps_m"))?;
        if !(eps_m >= 0.0 && eps_m < 1.0) {
            return Err(propertime::Error::UnphysicalParameters(format!(
                "eps_m={eps_m} outside [0, 1)"
            ))
            .into());
        }
        Ok(eps_m)
    }
}

/// `[grid]`: inclusive `start..=stop` with `points` samples, or whole trap
/// periods sampled uniformly with the endpoint excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Range(RangeSpec),
    Periods(PeriodSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodSpec {
    pub periods: usize,
    pub samples_per_period: usize,
}

impl RangeSpec {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.points < 2 || !(self.stop > self.start) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::usage(format!(
                "range needs points >= 2 and start < stop, got {}:{}:{}",
                self.start, self.stop, self.points
            )));
        }
        let n = self.points;
        Ok((0..n)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
            .collect())
    }
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match self {
            GridSpec::Range(r) => r.values(),
            GridSpec::Periods(p) => {
                if p.periods == 0 || p.samples_per_period < 2 {
                    return Err(CliError::usage("periods must be >= 1 and samples_per_period >= 2"));
                }
                Ok((0..p.periods * p.samples_per_period)
                    .map(|i| std::f64::consts::TAU * i as f64 / p.samples_per_period as f64)
                    .collect())
            }
        }
    }

    pub fn periods(&self) -> Option<usize> {
        match self {
            GridSpec::Periods(p) => Some(p.periods),
            GridSpec::Range(_) => None,
        }
    }

    /// `START:STOP:POINTS` from the command line.
    pub fn parse_flag(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected START:STOP:POINTS, got {s:?}"));
        }
        let f = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        Ok(GridSpec::Range(RangeSpec {
            start: f(parts[0])?,
            stop: f(parts[1])?,
            points: parts[2]
                .trim()
                .parse()
                .map_err(|e| format!("{:?}: {e}", parts[2]))?,
        }))
    }
}

/// `[run]`: numerical settings shared by both protocol runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub variant: Option<Variant>,
    pub dim: Option<usize>,
    pub window_periods: Option<usize>,
    pub unwrap_limit: Option<f64>,
    pub truncation_tol: Option<f64>,
}

impl RunSpec {
    fn dim(&self) -> Result<Option<FockDim>, CliError> {
        self.dim.map(FockDim::new).transpose().map_err(Into::into)
    }

    fn truncation(&self) -> Truncation {
        let mut t = Truncation::default();
        if let Some(tol) = self.truncation_tol {
            t.tol = tol;
        }
        t
    }
}

/// `[output]`: directory and file stem of the run products.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub name: Option<String>,
}

impl OutputSpec {
    pub fn paths(&self, out_override: Option<&Path>, default_name: &str) -> (PathBuf, PathBuf) {
        let dir = out_override
            .map(Path::to_path_buf)
            .or_else(|| self.dir.clone())
            .unwrap_or_else(|| PathBuf::from("."));
        let name = self.name.as_deref().unwrap_or(default_name);
        (dir.join(format!("{name}.csv")), dir.join(format!("{name}.summary.json")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamseyFile {
    pub params: ParamSpec,
    pub prep: MotionalPrep,
    pub grid: GridSpec,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RamseyFile {
    pub fn to_config(&self) -> Result<RamseyConfig, CliError> {
        let variant = self.run.variant.unwrap_or(Variant::ExactDecomposition);
        let mut cfg = RamseyConfig::new(self.params.resolve()?, self.prep, self.grid.values()?, variant);
        cfg.dim = self.run.dim()?;
        cfg.truncation = self.run.truncation();
        if let Some(l) = self.run.unwrap_limit {
            cfg.unwrap_limit = l;
        }
        cfg.window_periods = self.run.window_periods.or_else(|| self.grid.periods());
        Ok(cfg)
    }
}

/// `[protocol]` of a projection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSpec {
    pub beta: f64,
    #[serde(default = "default_projector")]
    pub projector: Projector,
}

fn default_projector() -> Projector {
    Projector::ZeroOne
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QsodsFile {
    pub params: ParamSpec,
    pub protocol: ProtocolSpec,
    pub grid: GridSpec,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

impl QsodsFile {
    pub fn to_config(&self) -> Result<QsodsConfig, CliError> {
        let params = self.params.resolve()?;
        let mut cfg = QsodsConfig::new(params, self.protocol.beta, self.protocol.projector.clone(), 0, 2);
        cfg.grid = self.grid.values()?;
        cfg.window_periods = self.run.window_periods.or_else(|| self.grid.periods()).unwrap_or(0);
        if let Some(v) = self.run.variant {
            cfg.variant = v;
        }
        cfg.dim = self.run.dim()?;
        cfg.truncation = self.run.truncation();
        if let Some(l) = self.run.unwrap_limit {
            cfg.unwrap_limit = l;
        }
        Ok(cfg)
    }
}

pub fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}
