use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use meecda_sim::metrics::read_csv;

fn meecda(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meecda"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn meecda")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["run", "--preset", "case1", "--protocol", "meecda", "--seed", "42", "--rounds", "3000"];
    let o = meecda(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let cell = dir.path().join("meecda/42");
    let csv = fs::read(cell.join("trace.csv")).unwrap();
    let summary = fs::read_to_string(cell.join("summary.txt")).unwrap();
    assert!(summary.contains("fnd"), "{summary}");
    assert_eq!(read_csv(cell.join("trace.csv")).unwrap().len(), 3000);

    let again = tempfile::tempdir().unwrap();
    assert!(meecda(&args, again.path()).status.success());
    assert_eq!(fs::read(again.path().join("meecda/42/trace.csv")).unwrap(), csv);
}

#[test]
fn run_case2_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let o = meecda(&["run", "--preset", "case2", "--protocol", "eecda-approx", "--seed", "7"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = read_csv(dir.path().join("eecda-approx/7/trace.csv")).unwrap();
    assert_eq!(rows.last().unwrap().alive(), 0);
    assert_eq!(rows[0].alive(), 100);
}

#[test]
fn compare_sweep_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = meecda(
        &["compare", "--preset", "case1", "--protocol", "meecda,eecda-approx", "--seeds", "20", "--rounds", "300"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let mut traces = 0;
    for p in ["meecda", "eecda-approx"] {
        for s in 0..20 {
            assert!(dir.path().join(format!("{p}/{s}/trace.csv")).is_file());
            traces += 1;
        }
    }
    assert_eq!(traces, 40);
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("meecda") && report.contains("eecda-approx"), "{report}");
    for plot in ["alive", "throughput", "residual", "ch_count", "lifetime"] {
        assert!(dir.path().join(format!("plots/{plot}.dat")).is_file(), "{plot}");
    }
}

#[test]
fn compare_needs_two_protocols() {
    let dir = tempfile::tempdir().unwrap();
    let o = meecda(&["compare", "--protocol", "meecda", "--rounds", "10"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("2 protocols"), "{}", stderr(&o));
}

#[test]
fn bad_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[heterogeneity]\nm0 = 1.5\n").unwrap();
    let o = meecda(&["run", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("heterogeneity.m0"), "{}", stderr(&o));

    fs::write(&cfg, "rounds = 5\n").unwrap();
    let o = meecda(&["run", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("rounds"), "{}", stderr(&o));
}

#[test]
fn unknown_protocol_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = meecda(&["run", "--protocol", "pegasis"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.toml");
    fs::write(&cfg, "preset = \"case2\"\nprotocols = [\"leach\"]\nseeds = [3]\nmax_rounds = 40\n").unwrap();
    let o = meecda(&["run", "--config", cfg.to_str().unwrap(), "--seed", "5", "--rounds", "25"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!dir.path().join("leach/3").exists());
    let rows = read_csv(dir.path().join("leach/5/trace.csv")).unwrap();
    assert_eq!(rows.len(), 25);
    // case2 starts with 102.5 J
    assert!((rows[0].residual_j - 102.5).abs() < 0.1);
}
