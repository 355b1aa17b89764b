use std::path::{Path, PathBuf};
use std::process::Command;

use clap::Args;

use propertime::tolerances::Tolerances;
use propertime::validation::{run_criterion, CheckKind, CheckOutcome, ValidationReport, CRITERIA};

use crate::config::load;
use crate::{io_error, write_file, CliError};

#[derive(Args, Debug, Clone)]
pub struct ValidateArgs {
    /// TOML tolerance overrides; omitted keys keep their defaults
    #[arg(long)]
    pub tolerances: Option<PathBuf>,
    /// Also write the full report as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Run only these criteria (repeatable)
    #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=7))]
    pub criteria: Vec<u8>,
}

/// Small run whose outputs must come out byte-identical twice in a row.
pub const REPLAY_CONFIG: &str = r#"
[params]
eps_c = 0.01
omega_c_over_omega = 1000.0

[prep]
kind = "squeezed"
r = 0.5
theta = 0.0

[grid]
start = 0.0
stop = 20.0
points = 21
"#;

fn replay_once(exe: &Path, config: &Path, out: &Path) -> Result<(String, String), String> {
    let status = Command::new(exe)
        .arg("ramsey")
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(String::from_utf8_lossy(&status.stderr).into_owned());
    }
    let read = |name: &str| std::fs::read_to_string(out.join(name)).map_err(|e| e.to_string());
    Ok((read("ramsey.csv")?, read("ramsey.summary.json")?))
}

/// Runs `exe ramsey` twice on the same config and compares the files byte for byte.
pub fn binary_replay(exe: &Path) -> CheckOutcome {
    let name = "CLI replay byte-identical";
    let result = (|| -> Result<bool, String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let config = dir.path().join("replay.toml");
        std::fs::write(&config, REPLAY_CONFIG).map_err(|e| e.to_string())?;
        let a = replay_once(exe, &config, &dir.path().join("a"))?;
        let b = replay_once(exe, &config, &dir.path().join("b"))?;
        Ok(a == b)
    })();
    let (pass, detail) = match result {
        Ok(true) => (true, "two runs produced identical CSV and JSON".to_string()),
        Ok(false) => (false, "outputs differ between runs".to_string()),
        Err(e) => (false, format!("replay failed: {}", e.trim())),
    };
    CheckOutcome {
        criterion: 7,
        name: name.into(),
        kind: CheckKind::Required,
        pass,
        value: f64::from(u8::from(pass)),
        threshold: 1.0,
        detail,
    }
}

pub fn report(tol: &Tolerances, criteria: &[u8], exe: Option<&Path>) -> ValidationReport {
    let wanted: Vec<u8> = if criteria.is_empty() {
        CRITERIA.iter().map(|(k, _)| *k).collect()
    } else {
        let mut c = criteria.to_vec();
        c.sort_unstable();
        c.dedup();
        c
    };
    let mut checks = Vec::new();
    for k in wanted {
        checks.extend(run_criterion(k, tol));
        if k == 7 {
            if let Some(exe) = exe {
                checks.push(binary_replay(exe));
            }
        }
    }
    ValidationReport { tolerances: *tol, checks }
}

pub fn run(a: &ValidateArgs) -> Result<(), CliError> {
    let tol: Tolerances = match &a.tolerances {
        Some(path) => load(path)?,
        None => Tolerances::default(),
    };
    let exe = std::env::current_exe().map_err(|e| io_error(Path::new("current_exe"), e))?;
    let report = report(&tol, &a.criteria, Some(&exe));
    print!("{}", report.render());
    if let Some(path) = &a.json {
        write_file(path, &propertime::report::to_json(&report)?)?;
    }
    if report.all_pass() {
        println!("all criteria: PASS");
        Ok(())
    } else {
        println!("all criteria: FAIL");
        Err(CliError::ValidationFailed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selected_criteria_only() {
        let r = report(&Tolerances::default(), &[2, 2], None);
        assert_eq!(r.criteria(), vec![2]);
        assert!(r.all_pass());
    }

    #[test]
    fn missing_binary_fails_the_replay() {
        let c = binary_replay(Path::new("/nonexistent/propertime"));
        assert!(!c.pass && c.detail.starts_with("replay failed"));
    }
}
