//! Cartesian-product sweeps written as long-format CSV: one row per grid
//! point and quantity, axes in a fixed order, rows in lexicographic axis order.

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use propertime::closed_forms::{
    ground_state_phase_full, ground_state_phase_series, ground_state_visibility_full,
    ground_state_visibility_series, phase_lag, qsods_averaged_offset, qsods_constant_phase,
    qsods_success_probability, qsods_success_probability_full, squeezed_offdiag_exact,
    thermal_high_t_offdiag, thermal_offdiag_exact, visibility_squeezed_approx,
};
use propertime::dynamics::{ClockParams, Variant};
use propertime::protocols::{run_ramsey, MotionalPrep, RamseyConfig};
use propertime::report::{fmt_f64, CsvTable};

use crate::config::{load, RangeSpec};
use crate::{write_file, CliError};

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// TOML sweep configuration
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Squeezed vacuum under the number-diagonal evolution, `Θ = ε_c ωt`.
    Squeezed,
    /// Thermal state, exact and high-temperature forms.
    Thermal,
    /// Motional ground state, exact and series forms.
    Ground,
    /// Projection-protocol offset and success probability.
    Qsods,
    /// Numerical Ramsey run per (ε_c, r | n̄) with `omega_t` as the time grid.
    Ramsey,
}

/// An axis is an explicit list or an inclusive linear range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    List(Vec<f64>),
    Range(RangeSpec),
}

impl Axis {
    fn values(&self) -> Result<Vec<f64>, CliError> {
        match self {
            Axis::List(v) if v.is_empty() => Err(CliError::usage("empty axis")),
            Axis::List(v) => Ok(v.clone()),
            Axis::Range(r) => r.values(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axes {
    pub eps_c: Option<Axis>,
    pub r: Option<Axis>,
    pub nbar: Option<Axis>,
    pub beta: Option<Axis>,
    pub omega_t: Option<Axis>,
}

pub const DEFAULT_MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub model: Model,
    pub axes: Axes,
    /// Cap on the number of grid points.
    pub max_points: Option<usize>,
    /// Propagator for the `ramsey` model.
    pub variant: Option<Variant>,
    /// Fixed Fock dimension for the `ramsey` model.
    pub dim: Option<usize>,
}

const AXIS_NAMES: [&str; 5] = ["eps_c", "r", "nbar", "beta", "omega_t"];

impl Model {
    /// Required axes and optional ones (at most one of the optional may be given).
    fn axes(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Model::Squeezed => (&["eps_c", "r", "omega_t"], &[]),
            Model::Thermal => (&["eps_c", "nbar", "omega_t"], &[]),
            Model::Ground => (&["eps_c", "omega_t"], &[]),
            Model::Qsods => (&["eps_c", "beta"], &[]),
            Model::Ramsey => (&["eps_c", "omega_t"], &["r", "nbar"]),
        }
    }
}

/// Resolved sweep: the axes in use (fixed order) and their values.
pub struct Plan {
    pub model: Model,
    pub names: Vec<&'static str>,
    pub values: Vec<Vec<f64>>,
    pub variant: Variant,
    pub dim: Option<usize>,
}

impl SweepFile {
    pub fn plan(&self) -> Result<Plan, CliError> {
        let given = [
            &self.axes.eps_c,
            &self.axes.r,
            &self.axes.nbar,
            &self.axes.beta,
            &self.axes.omega_t,
        ];
        let (required, optional) = self.model.axes();
        let mut names = Vec::new();
        let mut values = Vec::new();
        let mut optional_used = 0;
        for (name, axis) in AXIS_NAMES.iter().zip(given) {
            let needed = required.contains(name);
            let allowed = needed || optional.contains(name);
            match axis {
                Some(a) if allowed => {
                    if !needed {
                        optional_used += 1;
                    }
                    names.push(*name);
                    values.push(a.values()?);
                }
                Some(_) => {
                    return Err(CliError::usage(format!(
                        "axis {name} is not used by model {:?}",
                        self.model
                    )))
                }
                None if needed => {
                    return Err(CliError::usage(format!(
                        "model {:?} needs axis {name}",
                        self.model
                    )))
                }
                None => {}
            }
        }
        if optional_used > 1 {
            return Err(CliError::usage("give at most one of r and nbar"));
        }
        let total = values
            .iter()
            .try_fold(1usize, |acc, v| acc.checked_mul(v.len()))
            .unwrap_or(usize::MAX);
        let cap = self.max_points.unwrap_or(DEFAULT_MAX_POINTS);
        if total > cap {
            return Err(CliError::usage(format!(
                "sweep has {total} points, above the cap of {cap}"
            )));
        }
        if self.model != Model::Ramsey && (self.variant.is_some() || self.dim.is_some()) {
            return Err(CliError::usage("variant and dim only apply to the ramsey model"));
        }
        Ok(Plan {
            model: self.model,
            names,
            values,
            variant: self.variant.unwrap_or(Variant::ExactDecomposition),
            dim: self.dim,
        })
    }
}

impl Plan {
    fn get(&self, point: &[f64], name: &str) -> f64 {
        let i = self.names.iter().position(|n| *n == name).expect("planned axis");
        point[i]
    }

    /// Grid points in lexicographic order (last axis fastest).
    fn points(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new()];
        for axis in &self.values {
            out = out
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

type Row = (Vec<f64>, &'static str, f64);

fn closed_form(plan: &Plan, p: &[f64]) -> Result<Vec<(&'static str, f64)>, CliError> {
    let eps_c = plan.get(p, "eps_c");
    if !(0.0..1.0).contains(&eps_c) {
        return Err(propertime::Error::UnphysicalParameters(format!("eps_c={eps_c}")).into());
    }
    Ok(match plan.model {
        Model::Squeezed => {
            let (r, t) = (plan.get(p, "r"), plan.get(p, "omega_t"));
            let theta = eps_c * t;
            let z = squeezed_offdiag_exact(r, theta, 0.0);
            let approx = visibility_squeezed_approx(r, theta);
            vec![
                ("visibility", z.norm()),
                ("phase", phase_lag(z)),
                ("visibility_approx", approx.value),
                ("approx_breakdown", f64::from(u8::from(approx.breakdown))),
            ]
        }
        Model::Thermal => {
            let (nbar, t) = (plan.get(p, "nbar"), plan.get(p, "omega_t"));
            let eps = eps_c * t / 4.0;
            let z = thermal_offdiag_exact(nbar, eps, 0.0);
            let h = thermal_high_t_offdiag(nbar, eps, 0.0);
            vec![
                ("visibility", z.norm()),
                ("phase", phase_lag(z)),
                ("visibility_high_t", h.norm()),
                ("phase_high_t", phase_lag(h)),
            ]
        }
        Model::Ground => {
            let t = plan.get(p, "omega_t");
            vec![
                ("visibility", ground_state_visibility_full(eps_c, t)),
                ("phase", ground_state_phase_full(eps_c, t)),
                ("visibility_series", ground_state_visibility_series(eps_c, t)),
                ("phase_series", ground_state_phase_series(eps_c, t)),
            ]
        }
        Model::Qsods => {
            let beta = plan.get(p, "beta");
            vec![
                ("constant_phase", qsods_constant_phase(beta, eps_c)),
                ("averaged_offset", qsods_averaged_offset(beta, eps_c)),
                ("success_prob", qsods_success_probability(beta)),
                ("success_prob_full", qsods_success_probability_full(beta, eps_c)),
            ]
        }
        Model::Ramsey => unreachable!("simulated separately"),
    })
}

/// One Ramsey run per combination of the non-time axes.
fn simulated(plan: &Plan) -> Result<Vec<Row>, CliError> {
    let grid = plan.values.last().expect("omega_t is last").clone();
    let outer = Plan {
        model: plan.model,
        names: plan.names[..plan.names.len() - 1].to_vec(),
        values: plan.values[..plan.values.len() - 1].to_vec(),
        variant: plan.variant,
        dim: plan.dim,
    };
    let runs: Vec<Vec<Row>> = outer
        .points()
        .par_iter()
        .map(|p| -> Result<Vec<Row>, CliError> {
            let eps_c = outer.get(p, "eps_c");
            let prep = if outer.names.contains(&"r") {
                MotionalPrep::Squeezed { r: outer.get(p, "r"), theta: 0.0 }
            } else if outer.names.contains(&"nbar") {
                MotionalPrep::Thermal { nbar: outer.get(p, "nbar") }
            } else {
                MotionalPrep::Vacuum
            };
            // only rotating-frame quantities are reported, so ω_c/ω is immaterial
            let params = ClockParams::with_ratio(eps_c, 1.0)?;
            let mut cfg = RamseyConfig::new(params, prep, grid.clone(), plan.variant);
            cfg.dim = plan.dim.map(propertime::fock::FockDim::new).transpose()?;
            let res = run_ramsey(&cfg)?;
            let mut rows = Vec::with_capacity(res.points.len() * 4);
            for q in &res.points {
                let mut point = p.clone();
                point.push(q.omega_t);
                rows.push((point.clone(), "visibility", q.visibility));
                rows.push((point.clone(), "phase", q.phase_unwrapped));
                rows.push((point.clone(), "re_rho_eg", q.rho_eg.re));
                rows.push((point, "im_rho_eg", q.rho_eg.im));
            }
            Ok(rows)
        })
        .collect::<Result<_, _>>()?;
    Ok(runs.into_iter().flatten().collect())
}

pub fn sweep_csv(file: &SweepFile) -> Result<String, CliError> {
    let plan = file.plan()?;
    let rows: Vec<Row> = if plan.model == Model::Ramsey {
        simulated(&plan)?
    } else {
        let per_point: Vec<Vec<Row>> = plan
            .points()
            .par_iter()
            .map(|p| {
                Ok(closed_form(&plan, p)?
                    .into_iter()
                    .map(|(q, v)| (p.clone(), q, v))
                    .collect())
            })
            .collect::<Result<_, CliError>>()?;
        per_point.into_iter().flatten().collect()
    };
    let mut header: Vec<&str> = plan.names.clone();
    header.extend(["quantity", "value"]);
    let mut t = CsvTable::new(&header)?;
    for (point, q, v) in rows {
        let mut fields: Vec<String> = point.iter().map(|&x| fmt_f64(x)).collect();
        fields.push(q.to_string());
        fields.push(fmt_f64(v));
        t.row(&fields)?;
    }
    Ok(t.finish()?)
}

pub fn run(a: &SweepArgs) -> Result<(), CliError> {
    let file: SweepFile = load(&a.config)?;
    let csv = sweep_csv(&file)?;
    match &a.out {
        Some(path) => write_file(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
