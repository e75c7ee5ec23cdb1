use std::path::{Path, PathBuf};
use std::process::Command as Process;

use adiabatic_forms::error::Error;
use adiabatic_forms::harness::{self, cmd_report, kunneth_dims, run, run_scenario, write_atomic, Command, Outcome, RunOptions, Scenario};
use adiabatic_forms::lie_algebra::{betti_numbers, make_su2};

const MINIMAL: &str = r#"
name = "minimal"
[geometry]
dim = 2
[algebra]
name = "su2"
[run]
band = 0
"#;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.toml"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("harness-tests").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn opts(out: &Path) -> RunOptions {
    RunOptions { out: Some(out.to_path_buf()), seed: 0, band: None, quiet: true }
}

#[test]
fn every_fixture_parses() {
    for name in ["t4_su2_cs3", "t4_su2_flat", "t3_su2_pages", "t2_u1_c1zero", "t2_u1_c1nonzero"] {
        let s = Scenario::load(&fixture_path(name)).unwrap();
        assert_eq!(s.name, name);
        assert!(!s.criteria.is_empty());
        s.connection().unwrap();
    }
}

#[test]
fn defaults_fill_missing_sections() {
    let s = Scenario::from_toml_str(MINIMAL).unwrap();
    assert_eq!(s.k_max, 6);
    assert!(s.is_flat_trivial());
    assert!(s.polynomial().is_err());
    assert_eq!(s.tolerances.rank, 1e-9);
}

#[test]
fn decimals_are_read_exactly() {
    let text = MINIMAL.replace("band = 0", "band = 0\ndeltas = [\"0.1\", \"1e-2\"]");
    let s = Scenario::from_toml_str(&text).unwrap();
    assert_eq!(s.deltas, vec![0.1, 0.01]);
}

#[test]
fn invalid_scenarios_are_config_errors() {
    let bad = [
        MINIMAL.replace("band = 0", "band = 0\ndeltas = [\"0.5x\"]"),
        MINIMAL.replace("band = 0", "band = 0\ndeltas = [\"1.5\"]"),
        MINIMAL.replace("band = 0", "band = 0\ndeltas = [\"0\"]"),
        MINIMAL.replace("band = 0", "band = 0\ndeltas = [\"nan\"]"),
        MINIMAL.replace("[run]", "[tolerances]\nrank = \"-1e-9\"\n[run]"),
        MINIMAL.replace("name = \"su2\"", "name = \"e8\""),
        MINIMAL.replace("dim = 2", "dim = 2\ncolour = 3"),
        MINIMAL.replace("[run]", "[[connection.entries]]\ngenerator = 0\nterms = [{ freq = [0, 0], index = [0], re = \"1\" }]\n[[curvature.entries]]\ngenerator = 0\nterms = [{ freq = [0, 0], index = [0, 1], re = \"1\" }]\n[run]"),
        MINIMAL.replace("[run]", "[[connection.entries]]\ngenerator = 7\nterms = [{ freq = [0, 0], index = [0], re = \"1\" }]\n[run]"),
        MINIMAL.replace("[run]", "[polynomial]\nkind = \"first_chern\"\n[run]"),
    ];
    for text in &bad {
        let e = Scenario::from_toml_str(text).expect_err(text);
        assert_eq!(Outcome::of_error(&e), Outcome::ConfigError, "{text}\n{e}");
    }
}

#[test]
fn kunneth_dims_for_su2_over_t3() {
    let betti = betti_numbers(&make_su2());
    assert_eq!(kunneth_dims(3, &betti, 0), vec![((0, 0), 1)]);
    assert_eq!(kunneth_dims(3, &betti, 3), vec![((0, 3), 1), ((1, 2), 0), ((2, 1), 0), ((3, 0), 1)]);
    let total: usize = (0..=6).flat_map(|p| kunneth_dims(3, &betti, p)).map(|x| x.1).sum();
    assert_eq!(total, 8 * 2);
}

#[test]
fn exit_codes_follow_outcomes() {
    assert_eq!(Outcome::Pass.exit_code(), 0);
    assert_eq!(Outcome::ToleranceFailure.exit_code(), 1);
    assert_eq!(Outcome::ConfigError.exit_code(), 2);
    assert_eq!(Outcome::SolverFailure.exit_code(), 3);
    assert_eq!(Outcome::of_error(&Error::NotStabilized(6)), Outcome::SolverFailure);
    assert_eq!(Outcome::of_error(&Error::NotExact { coexact: 1.0, harmonic: 0.0, total: 1.0 }), Outcome::ToleranceFailure);
    assert_eq!(Outcome::of_error(&Error::Config("x".into())), Outcome::ConfigError);
}

#[test]
fn write_atomic_replaces_and_leaves_no_temporaries() {
    let dir = scratch("atomic");
    let path = dir.join("nested").join("a.json");
    write_atomic(&path, b"one").unwrap();
    write_atomic(&path, b"two").unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
    let names: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1);
}

#[test]
fn missing_scenario_reports_config_error() {
    let dir = scratch("missing");
    let r = run(Command::Pages, &dir.join("nope.toml"), &opts(&dir));
    assert_eq!(r.outcome, Outcome::ConfigError);
    assert!(dir.join("nope").join("pages.json").exists());
}

#[test]
fn reports_round_trip_through_summary() {
    let dir = scratch("round-trip");
    let r1 = run(Command::Pages, &fixture_path("t2_u1_c1nonzero"), &opts(&dir));
    assert!(r1.passed(), "{:?}", r1.checks);
    assert!(!r1.criterion("4").is_empty());
    let r2 = run(Command::VerifyCs1, &fixture_path("t2_u1_c1nonzero"), &opts(&dir));
    assert!(r2.passed(), "{:?}", r2.checks);
    let summary = cmd_report(&dir).unwrap();
    assert_eq!(summary.reports, 2);
    assert_eq!(summary.outcome, Outcome::Pass);
    let row = summary.criteria.iter().find(|r| r.criterion == "4").unwrap();
    assert!(row.pass);
    assert_eq!(row.sources.len(), 2);
    assert!(dir.join("summary.md").exists() && dir.join("summary.json").exists());
}

#[test]
fn empty_report_directory_is_an_error() {
    let dir = scratch("empty");
    assert!(cmd_report(&dir).is_err());
}

#[test]
fn seeded_runs_are_deterministic() {
    let s = Scenario::load(&fixture_path("t2_u1_c1zero")).unwrap();
    let a = scratch("seed-a");
    let b = scratch("seed-b");
    let ra = run_scenario(Command::VerifyCs1, &s, &RunOptions { seed: 7, ..opts(&a) });
    let rb = run_scenario(Command::VerifyCs1, &s, &RunOptions { seed: 7, ..opts(&b) });
    assert_eq!(ra.data, rb.data);
    assert_eq!(ra.seed, 7);
    let fa = std::fs::read_to_string(a.join(&s.name).join("verify-cs1.csv")).unwrap();
    let fb = std::fs::read_to_string(b.join(&s.name).join("verify-cs1.csv")).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn band_override_below_connection_band_is_rejected() {
    let dir = scratch("band");
    let r = run(Command::Pages, &fixture_path("t2_u1_c1zero"), &RunOptions { band: Some(0), ..opts(&dir) });
    assert_eq!(r.outcome, Outcome::ConfigError);
}

#[test]
fn cli_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_adiabatic");
    let dir = scratch("cli");
    let status = |args: &[&str]| Process::new(bin).args(args).status().unwrap().code();
    let out = dir.to_str().unwrap();
    let cs1 = fixture_path("t2_u1_c1zero");
    assert_eq!(status(&["lie-check", "--scenario", cs1.to_str().unwrap(), "--out", out, "--quiet"]), Some(0));
    assert_eq!(status(&["pages", "--out", out, "--quiet"]), Some(2));
    assert_eq!(status(&["pages", "--scenario", "/nonexistent.toml", "--out", out, "--quiet"]), Some(2));
    // the unreadable scenario left a config-error report behind
    assert_eq!(status(&["report", "--out", out, "--quiet"]), Some(2));
    let clean = scratch("cli-clean");
    let clean = clean.to_str().unwrap();
    assert_eq!(status(&["lie-check", "--scenario", cs1.to_str().unwrap(), "--out", clean, "--quiet"]), Some(0));
    assert_eq!(status(&["report", "--out", clean, "--quiet"]), Some(0));
    assert_eq!(harness::Command::Spectrum.name(), "spectrum");
}
