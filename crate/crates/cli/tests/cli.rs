use std::path::Path;
use std::process::{Command, Output};

use ncfk::builtins::builtin_operator;
use ncfk::ncfk::{read_ncfk, to_bytes, NcfkData};
use ncfk::LineGrid;

fn ncfk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncfk")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn verify_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "r.json");
    let res = ncfk(&["verify", "plancherel", "--n", "64", "--seed", "42", "--out", &out]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["suite"], "plancherel");
    assert_eq!(report["pass"], true);
    assert_eq!(report["grid"]["n"], 64);
    assert!(report["tau_hash"].as_str().unwrap().len() == 64);
}

#[test]
fn unknown_suite_exits_with_usage() {
    let res = ncfk(&["verify", "bogus"]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("usage"));
}

#[test]
fn unwritable_output_is_an_io_failure() {
    let res = ncfk(&["verify", "hermite", "--n", "32", "--out", "/nonexistent-dir/r.json"]);
    assert_eq!(code(&res), 3);
}

#[test]
fn decay_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "d.csv");
    let res = ncfk(&["synthesis-decay", "--x", "hermite01", "--n", "64", "--p", "1.5", "--levels", "1", "--csv", &csv]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("delta,lp_norm,bound,s1_norm\n"));
    assert!(dir.path().join("d.json").exists());
}

#[test]
fn nonzero_trace_exits_four_with_the_trace() {
    let dir = tempfile::tempdir().unwrap();
    let res = ncfk(&["synthesis-decay", "--x", "gauss-proj", "--n", "32", "--csv", &path(dir.path(), "d.csv")]);
    assert_eq!(code(&res), 4);
    assert!(String::from_utf8_lossy(&res.stderr).contains("measured trace"));
}

#[test]
fn find_rho_on_zero_operator() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "rho.ncfk");
    let res = ncfk(&["find-rho", "--x", "zero", "--n", "64", "--eps", "0.1", "--out", &out]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rho.json")).unwrap()).unwrap();
    assert_eq!(meta["final_norm"], 0.0);
    assert_eq!(meta["delta0"], 1.0);
    assert!(meta["versal"].as_f64().unwrap() > 0.0);
    let rho = read_ncfk(std::fs::File::open(&out).unwrap()).unwrap();
    assert!(matches!(rho, NcfkData::Plane(_)));
}

#[test]
fn find_rho_exhaustion_exits_five() {
    let dir = tempfile::tempdir().unwrap();
    let res = ncfk(&["find-rho", "--x", "hermite01", "--n", "64", "--eps", "0.001", "--out", &path(dir.path(), "rho.ncfk")]);
    assert_eq!(code(&res), 5);
    assert!(String::from_utf8_lossy(&res.stderr).contains("best norm"));
    assert!(!dir.path().join("rho.ncfk").exists());
}

#[test]
fn operator_can_come_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = LineGrid::self_dual(32).unwrap();
    let x = builtin_operator("random-tracezero", &g, 4).unwrap();
    let input = path(dir.path(), "x.ncfk");
    std::fs::write(&input, to_bytes(&NcfkData::Kernel(x))).unwrap();
    let res = ncfk(&["find-rho", "--x", &input, "--eps", "100", "--out", &path(dir.path(), "rho.ncfk")]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));

    let bad = path(dir.path(), "bad.ncfk");
    std::fs::write(&bad, b"NCFK\x02").unwrap();
    let res = ncfk(&["find-rho", "--x", &bad, "--eps", "1", "--out", &path(dir.path(), "r2.ncfk")]);
    assert_eq!(code(&res), 3);
}

#[test]
fn bench_rows_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "b.csv");
    let res = ncfk(&["bench", "--n", "16", "--csv", &csv]);
    assert_eq!(code(&res), 0);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 2);

    let res = ncfk(&["bench", "--n", "16,128", "--cap", "64", "--reps", "1", "--csv", &csv]);
    assert_eq!(code(&res), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("128,skipped,"), "{last}");
    assert!(last.ends_with(",skipped"));
}

#[test]
fn thread_override_is_validated() {
    let res = Command::new(env!("CARGO_BIN_EXE_ncfk"))
        .args(["verify", "hermite", "--n", "32"])
        .env("NCFK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&res), 2);
    let res = Command::new(env!("CARGO_BIN_EXE_ncfk"))
        .args(["verify", "hermite", "--n", "32"])
        .env("NCFK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&res), 0);
}
