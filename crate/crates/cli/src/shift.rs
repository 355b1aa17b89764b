use std::path::PathBuf;

use clap::{Args, ValueEnum};

use propertime::closed_forms::{
    ground_state_visibility_full, qsods_constant_phase, qsods_success_probability, sods_thermal_first_order,
    sqsods, thermal_offdiag_exact, visibility_squeezed_approx, visibility_squeezed_exact, vsods, Regime,
    ShiftResult,
};
use propertime::report::{fmt_f64, CsvTable};

use crate::{write_file, CliError, ParamArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShiftKind {
    /// Thermal second-order Doppler shift
    Sods,
    /// Vacuum (zero-point) shift
    Vsods,
    /// Squeezed-vacuum shift
    Sqsods,
    /// Averaged phase of the displacement-and-projection protocol
    Qsods,
}

impl ShiftKind {
    fn name(self) -> &'static str {
        match self {
            ShiftKind::Sods => "sods",
            ShiftKind::Vsods => "vsods",
            ShiftKind::Sqsods => "sqsods",
            ShiftKind::Qsods => "qsods",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ShiftArgs {
    pub kind: ShiftKind,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Squeezing parameter
    #[arg(long)]
    pub r: Option<f64>,
    /// Mean thermal occupation
    #[arg(long)]
    pub nbar: Option<f64>,
    /// Displacement strength
    #[arg(long)]
    pub beta: Option<f64>,
    /// Interrogation time in seconds (dimensionless ωt without a preset); adds the visibility
    #[arg(long)]
    pub t_sec: Option<f64>,
    /// Write a one-row CSV here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Resolved row of the shift table.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftRow {
    pub kind: ShiftKind,
    pub preset: Option<String>,
    pub trap_mhz: Option<f64>,
    pub eps_c: Option<f64>,
    pub eps_m: Option<f64>,
    pub r: Option<f64>,
    pub nbar: Option<f64>,
    pub beta: Option<f64>,
    pub t_sec: Option<f64>,
    pub result: ShiftResult,
    pub success_prob: Option<f64>,
    /// Small-Θ visibility and its breakdown flag (squeezed only).
    pub approx_visibility: Option<(f64, bool)>,
}

const COLUMNS: [&str; 14] = [
    "kind",
    "preset",
    "trap_mhz",
    "eps_c",
    "eps_m",
    "r",
    "nbar",
    "beta",
    "t_sec",
    "fractional_shift",
    "phase",
    "visibility",
    "success_prob",
    "regime",
];

fn require(v: Option<f64>, flag: &str, kind: ShiftKind) -> Result<f64, CliError> {
    let x = v.ok_or_else(|| CliError::usage(format!("{} needs --{flag}", kind.name())))?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(propertime::Error::UnphysicalParameters(format!("--{flag} {x}")).into());
    }
    Ok(x)
}

fn reject(v: Option<f64>, flag: &str, kind: ShiftKind) -> Result<(), CliError> {
    match v {
        Some(_) => Err(CliError::usage(format!("--{flag} does not apply to {}", kind.name()))),
        None => Ok(()),
    }
}

pub fn evaluate(a: &ShiftArgs) -> Result<ShiftRow, CliError> {
    let spec = a.params.spec();
    let kind = a.kind;
    let preset = a.params.preset.map(|s| match s {
        propertime::dynamics::Species::AlPlus => "al+".to_string(),
        propertime::dynamics::Species::BPlus => "b+".to_string(),
    });
    let trap_mhz = a.params.preset.map(|_| a.params.trap_mhz.unwrap_or(crate::config::DEFAULT_TRAP_MHZ));
    if let Some(t) = a.t_sec {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(propertime::Error::UnphysicalParameters(format!("--t-sec {t}")).into());
        }
    }
    // ωt for the optional visibility column; dimensionless input already is ωt
    let omega_t = |t: f64| -> Result<f64, CliError> {
        if spec.preset.is_some() || (spec.eps_c.is_some() && spec.eps_m.is_some()) {
            Ok(spec.resolve()?.omega * t)
        } else {
            Ok(t)
        }
    };
    let mut row = ShiftRow {
        kind,
        preset,
        trap_mhz,
        eps_c: None,
        eps_m: None,
        r: None,
        nbar: None,
        beta: None,
        t_sec: a.t_sec,
        result: vsods(0.0),
        success_prob: None,
        approx_visibility: None,
    };
    match kind {
        ShiftKind::Sods | ShiftKind::Vsods => {
            reject(a.r, "r", kind)?;
            reject(a.beta, "beta", kind)?;
            let nbar = if kind == ShiftKind::Sods {
                require(a.nbar, "nbar", kind)?
            } else {
                reject(a.nbar, "nbar", kind)?;
                0.0
            };
            let eps_m = spec.eps_m()?;
            row.eps_m = Some(eps_m);
            row.nbar = (kind == ShiftKind::Sods).then_some(nbar);
            row.result = if kind == ShiftKind::Sods {
                sods_thermal_first_order(nbar, eps_m)
            } else {
                vsods(eps_m)
            };
            if let Some(t) = a.t_sec {
                let eps_c = spec.eps_c()?;
                row.eps_c = Some(eps_c);
                let wt = omega_t(t)?;
                row.result.visibility = if kind == ShiftKind::Sods {
                    thermal_offdiag_exact(nbar, eps_c * wt / 4.0, 0.0).norm()
                } else {
                    ground_state_visibility_full(eps_c, wt)
                };
            }
        }
        ShiftKind::Sqsods => {
            reject(a.nbar, "nbar", kind)?;
            reject(a.beta, "beta", kind)?;
            let r = require(a.r, "r", kind)?;
            let eps_m = spec.eps_m()?;
            row.eps_m = Some(eps_m);
            row.r = Some(r);
            row.result = sqsods(r, eps_m);
            if let Some(t) = a.t_sec {
                let p = spec.resolve()?;
                row.eps_c = Some(p.eps_c);
                let theta = p.theta(t);
                row.result.visibility = visibility_squeezed_exact(r, theta);
                let approx = visibility_squeezed_approx(r, theta);
                row.approx_visibility = Some((approx.value, approx.breakdown));
            }
        }
        ShiftKind::Qsods => {
            reject(a.r, "r", kind)?;
            reject(a.nbar, "nbar", kind)?;
            reject(a.t_sec, "t-sec", kind)?;
            let beta = require(a.beta, "beta", kind)?;
            let eps_c = spec.eps_c()?;
            row.eps_c = Some(eps_c);
            row.beta = Some(beta);
            row.result = ShiftResult {
                fractional_shift: None,
                phase_offset: Some(qsods_constant_phase(beta, eps_c)),
                visibility: 1.0,
                regime: Regime::TimeAveraged,
            };
            row.success_prob = Some(qsods_success_probability(beta));
        }
    }
    if row.eps_c.is_none() && (spec.preset.is_some() || spec.eps_c.is_some()) {
        row.eps_c = Some(spec.eps_c()?);
    }
    if row.eps_m.is_none() && (spec.preset.is_some() || spec.eps_m.is_some()) {
        row.eps_m = Some(spec.eps_m()?);
    }
    Ok(row)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn csv(row: &ShiftRow) -> Result<String, CliError> {
    let mut t = CsvTable::new(&COLUMNS)?;
    t.row(&[
        row.kind.name().to_string(),
        row.preset.clone().unwrap_or_default(),
        opt(row.trap_mhz),
        opt(row.eps_c),
        opt(row.eps_m),
        opt(row.r),
        opt(row.nbar),
        opt(row.beta),
        opt(row.t_sec),
        opt(row.result.fractional_shift),
        opt(row.result.phase_offset),
        fmt_f64(row.result.visibility),
        opt(row.success_prob),
        row.result.regime.name().to_string(),
    ])?;
    Ok(t.finish()?)
}

fn table(row: &ShiftRow) -> String {
    let mut lines: Vec<(String, String)> = vec![("kind".into(), row.kind.name().into())];
    let mut push = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            lines.push((k.into(), v));
        }
    };
    let g = |v: Option<f64>| v.map(|x| format!("{x:.6e}"));
    push("preset", row.preset.clone());
    push("trap_mhz", g(row.trap_mhz));
    push("eps_c", g(row.eps_c));
    push("eps_m", g(row.eps_m));
    push("r", g(row.r));
    push("nbar", g(row.nbar));
    push("beta", g(row.beta));
    push("t_sec", g(row.t_sec));
    push("fractional_shift", g(row.result.fractional_shift));
    push("phase [rad]", g(row.result.phase_offset));
    push("visibility", Some(format!("{:.6}", row.result.visibility)));
    if let Some((v, broken)) = row.approx_visibility {
        push(
            "visibility_approx",
            Some(format!("{v:.6}{}", if broken { "  (outside its validity range)" } else { "" })),
        );
    }
    push("success_prob", row.success_prob.map(|p| format!("{p:.6}")));
    push("regime", Some(row.result.regime.name().into()));
    lines
        .iter()
        .map(|(k, v)| format!("{k:<18} {v}\n"))
        .collect()
}

pub fn run(a: &ShiftArgs) -> Result<(), CliError> {
    let row = evaluate(a)?;
    print!("{}", table(&row));
    if let Some(path) = &a.out {
        write_file(path, &csv(&row)?)?;
    }
    Ok(())
}
