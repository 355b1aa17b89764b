use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_propertime");

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(cwd).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SQUEEZED: &str = r#"
[params]
eps_c = 0.01
eps_m = 1e-5

[prep]
kind = "squeezed"
r = 0.5
theta = 0.0

[grid]
start = 0.0
stop = 20.0
points = 11

[output]
name = "sq"
"#;

#[test]
fn ramsey_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), SQUEEZED).unwrap();
    let o = run(&["ramsey", "--config", "run.toml", "--out", "out"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/sq.csv")).unwrap();
    assert!(csv.starts_with("omega_t,re_rho_eg,im_rho_eg,visibility,phase_unwrapped,success_prob\r\n"));
    assert_eq!(csv.lines().count(), 12);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/sq.summary.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["variant"], "exact-decomposition");
    assert!(json["witness"]["max_witness"].as_f64().unwrap() > 0.0);
}

#[test]
fn grid_and_dim_flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), SQUEEZED).unwrap();
    let o = run(
        &["ramsey", "--config", "run.toml", "--out", ".", "--grid", "0:5:6", "--dim", "96"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(dir.path().join("sq.csv")).unwrap().lines().count(), 7);
    assert!(stdout(&o).contains("dim             96"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = SQUEEZED.replace("[output]", "[output]\ncolour = \"red\"");
    std::fs::write(dir.path().join("bad.toml"), bad).unwrap();
    assert_eq!(code(&run(&["ramsey", "--config", "bad.toml"], dir.path())), 2);
    assert_eq!(code(&run(&["ramsey", "--config", "missing.toml"], dir.path())), 2);
    let unphysical = SQUEEZED.replace("eps_c = 0.01", "eps_c = 1.5");
    std::fs::write(dir.path().join("u.toml"), unphysical).unwrap();
    assert_eq!(code(&run(&["ramsey", "--config", "u.toml"], dir.path())), 2);
    assert_eq!(code(&run(&["shift", "sods", "--eps-m", "1e-5"], dir.path())), 2);
    assert_eq!(code(&run(&["frobnicate"], dir.path())), 2);
}

#[test]
fn truncation_overflow_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let big = SQUEEZED.replace("r = 0.5", "r = 3.0");
    std::fs::write(dir.path().join("big.toml"), big).unwrap();
    let o = run(&["ramsey", "--config", "big.toml", "--dim", "40"], dir.path());
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("required dim"));
}

#[test]
fn shift_table_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["shift", "qsods", "--eps-c", "1e-3", "--beta", "2", "--out", "q.csv"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("success_prob       0.2030"));
    let csv = std::fs::read_to_string(dir.path().join("q.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().ends_with("time-averaged"));

    let o = run(&["shift", "vsods", "--preset", "al+"], dir.path());
    assert!(stdout(&o).contains("fractional_shift   -8.2"), "{}", stdout(&o));
}

#[test]
fn sweep_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "model = \"squeezed\"\n[axes]\neps_c = [1e-3, 1e-2]\nr = [0.5, 1.0]\nomega_t = { start = 0.0, stop = 100.0, points = 11 }\n";
    std::fs::write(dir.path().join("s.toml"), cfg).unwrap();
    let a = run(&["sweep", "--config", "s.toml"], dir.path());
    let b = run(&["sweep", "--config", "s.toml", "--out", "s.csv"], dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    assert_eq!(a.stdout, std::fs::read(dir.path().join("s.csv")).unwrap());
    assert_eq!(stdout(&a).lines().count(), 1 + 2 * 2 * 11 * 4);
}

#[test]
fn validate_subset_passes_and_bad_tolerances_fail() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["validate", "--criterion", "2", "--json", "v.json"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("criterion 2: PASS"));
    assert!(dir.path().join("v.json").exists());

    // a tolerance tighter than the achievable error makes validation fail
    std::fs::write(dir.path().join("t.toml"), "shift_rel_tol = 1e-9\n").unwrap();
    let o = run(&["validate", "--criterion", "2", "--tolerances", "t.toml"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("criterion 2: FAIL"));

    std::fs::write(dir.path().join("x.toml"), "nonsense = 1\n").unwrap();
    assert_eq!(code(&run(&["validate", "--tolerances", "x.toml"], dir.path())), 2);
}
