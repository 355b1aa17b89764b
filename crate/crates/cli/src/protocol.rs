use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use propertime::protocols::{entanglement_witness, run_qsods_protocol, run_ramsey, ProtocolResult};
use propertime::report::{protocol_csv, to_json};

use crate::config::{load, GridSpec, OutputSpec, QsodsFile, RamseyFile};
use crate::{parse_grid, write_file, CliError};

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// TOML run configuration
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides [output].dir)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fixed Fock dimension (overrides [run].dim)
    #[arg(long)]
    pub dim: Option<usize>,
    /// Time grid START:STOP:POINTS in units of ωt (overrides [grid])
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
}

#[derive(Serialize)]
struct WitnessExtrema {
    max_witness: f64,
    omega_t_at_max: f64,
    min_purity: f64,
}

/// JSON summary: the resolved configuration next to the run summary.
#[derive(Serialize)]
struct Summary<'a, C: Serialize> {
    config: &'a C,
    summary: &'a propertime::protocols::ProtocolSummary,
    witness: Option<WitnessExtrema>,
}

fn witness_extrema(result: &ProtocolResult) -> Option<WitnessExtrema> {
    let series = entanglement_witness(result).ok()?;
    let top = series
        .iter()
        .filter(|w| w.witness.is_finite())
        .max_by(|a, b| a.witness.total_cmp(&b.witness))?;
    Some(WitnessExtrema {
        max_witness: top.witness,
        omega_t_at_max: top.omega_t,
        min_purity: series.iter().map(|w| w.purity).fold(1.0, f64::min),
    })
}

fn emit<C: Serialize>(
    result: &ProtocolResult,
    config: &C,
    output: &OutputSpec,
    out: Option<&Path>,
    default_name: &str,
    witness: bool,
) -> Result<(), CliError> {
    let (csv_path, json_path) = output.paths(out, default_name);
    write_file(&csv_path, &protocol_csv(result)?)?;
    let summary = Summary {
        config,
        summary: &result.summary,
        witness: if witness { witness_extrema(result) } else { None },
    };
    write_file(&json_path, &to_json(&summary)?)?;
    let s = &result.summary;
    println!("points          {}", result.points.len());
    println!("dim             {}", s.dim);
    println!("variant         {}", s.variant);
    if let Some(fit) = &s.fit {
        println!("fractional_shift {:.6e}", fit.fractional_shift);
        println!("fit_residual_rms {:.3e}", fit.residual_rms);
    }
    if let Some(avg) = s.averaged_phase {
        println!("averaged_phase  {avg:.9e}");
    }
    println!("min_visibility  {:.9}", s.min_visibility);
    println!("mean_success    {:.6}", s.mean_success_prob);
    if s.flagged_points > 0 {
        println!("flagged_points  {}", s.flagged_points);
    }
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

pub fn run_ramsey_cmd(a: &RunArgs) -> Result<(), CliError> {
    let mut file: RamseyFile = load(&a.config)?;
    if let Some(g) = &a.grid {
        file.grid = g.clone();
    }
    if a.dim.is_some() {
        file.run.dim = a.dim;
    }
    let cfg = file.to_config()?;
    let result = run_ramsey(&cfg)?;
    emit(&result, &cfg, &file.output, a.out.as_deref(), "ramsey", true)
}

pub fn run_qsods_cmd(a: &RunArgs) -> Result<(), CliError> {
    let mut file: QsodsFile = load(&a.config)?;
    if let Some(g) = &a.grid {
        file.grid = g.clone();
    }
    if a.dim.is_some() {
        file.run.dim = a.dim;
    }
    let cfg = file.to_config()?;
    let result = run_qsods_protocol(&cfg)?;
    emit(&result, &cfg, &file.output, a.out.as_deref(), "qsods", false)
}
