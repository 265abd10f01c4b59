use std::fs;

use assert_cmd::Command;
use predicates::str::contains;

fn flintlab(dir: &std::path::Path) -> Command {
    let mut cmd = Command::cargo_bin("flintlab").unwrap();
    cmd.current_dir(dir).env_remove("FLINTLAB_OUT");
    cmd
}

fn stdout_line(out: &[u8], prefix: &str) -> String {
    String::from_utf8_lossy(out)
        .lines()
        .find(|l| l.starts_with(prefix))
        .unwrap_or_else(|| panic!("no line starting with {prefix:?}"))
        .to_string()
}

#[test]
fn verify_reduction_passes() {
    let dir = tempfile::tempdir().unwrap();
    flintlab(dir.path())
        .args(["verify", "--identity", "reduction", "--N", "10000", "--digits", "30"])
        .assert()
        .success()
        .stdout(contains("termwise residual"))
        .stdout(contains("ok"));
}

#[test]
fn exit_statuses() {
    let dir = tempfile::tempdir().unwrap();
    // usage
    flintlab(dir.path()).args(["verify", "--identity", "nope", "--N", "3"]).assert().code(2);
    flintlab(dir.path()).args(["report", "--table", "71"]).assert().code(2);
    // precision: a 6-digit index cannot be reduced with 3 guard digits
    flintlab(dir.path()).args(["classify", "--N", "100000", "--guard-digits", "3"]).assert().code(3);
    // verification
    flintlab(dir.path())
        .args(["verify", "--identity", "reduction", "--N", "500", "--tolerance", "1e-60"])
        .assert()
        .code(4);
    // I/O
    flintlab(dir.path())
        .args(["classify", "--N", "10", "--out", "/dev/null/sub"])
        .assert()
        .code(5);
}

#[test]
fn resumed_sum_equals_a_fresh_sum() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let ck = ck.to_str().unwrap();
    flintlab(dir.path()).args(["sum", "--series", "R1STAR", "--N", "2000", "--resume", ck]).assert().success();
    let resumed = flintlab(dir.path())
        .args(["sum", "--series", "R1STAR", "--N", "4000", "--resume", ck, "--checkpoint-every", "700"])
        .output()
        .unwrap();
    let fresh = flintlab(dir.path()).args(["sum", "--series", "R1STAR", "--N", "4000"]).output().unwrap();
    assert!(resumed.status.success());
    assert_eq!(stdout_line(&resumed.stdout, "re "), stdout_line(&fresh.stdout, "re "));
    assert!(stdout_line(&fresh.stdout, "re ").starts_with("re 86.13"));
}

#[test]
fn damaged_or_foreign_checkpoints_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.json");
    let ck = path.to_str().unwrap();
    flintlab(dir.path()).args(["sum", "--series", "S", "--N", "500", "--resume", ck]).assert().success();
    // another precision
    flintlab(dir.path())
        .args(["sum", "--series", "S", "--N", "600", "--resume", ck, "--digits", "31"])
        .assert()
        .code(2)
        .stderr(contains("precision"));
    // another series
    flintlab(dir.path()).args(["sum", "--series", "H3", "--N", "600", "--resume", ck]).assert().code(2);
    let text = fs::read_to_string(&path).unwrap().replace("\"last_index\": 500", "\"last_index\": 499");
    fs::write(&path, text).unwrap();
    flintlab(dir.path())
        .args(["sum", "--series", "S", "--N", "600", "--resume", ck])
        .assert()
        .code(5)
        .stderr(contains("hash"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"digits": 20}"#).unwrap();
    let out = flintlab(dir.path())
        .args(["sum", "--series", "H3", "--N", "10", "--digits", "40", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    let line = stdout_line(&out.stdout, "re ");
    assert_eq!(line.split('.').nth(1).unwrap().len(), 20, "{line}");
    fs::write(&cfg, r#"{"colour": 1}"#).unwrap();
    flintlab(dir.path()).args(["convergents", "--config", cfg.to_str().unwrap()]).assert().code(2);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("env-out");
    flintlab(dir.path())
        .env("FLINTLAB_OUT", &out)
        .args(["classify", "--N", "1000"])
        .assert()
        .success()
        .stdout(contains("resonant [1, 3, 22, 355]"));
    let csv = fs::read_to_string(out.join("census_1000.csv")).unwrap();
    assert!(csv.starts_with("n,m,delta,abs_sin,regime\n"));
    assert_eq!(csv.lines().count(), 1001);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("census_1000.json")).unwrap()).unwrap();
    assert_eq!(summary["count_r"], 4);
    // an explicit flag wins over the environment
    let flag = dir.path().join("flag-out");
    flintlab(dir.path())
        .env("FLINTLAB_OUT", &out)
        .args(["classify", "--N", "10", "--summary-only", "--out", flag.to_str().unwrap()])
        .assert()
        .success();
    assert!(flag.join("census_10.json").exists());
}

#[test]
fn outputs_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        flintlab(dir.path())
            .args(["spectral", "--sigma", "0.5", "--resonance-kmax", "500", "--out", out.to_str().unwrap()])
            .assert()
            .success();
        flintlab(dir.path())
            .args(["classify", "--N", "2000", "--out", out.to_str().unwrap()])
            .assert()
            .success();
        files.push(
            ["spectral.json", "census_2000.json", "census_2000.csv"].map(|f| fs::read(out.join(f)).unwrap()),
        );
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn cl3_relation_scan_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    flintlab(dir.path())
        .args(["relation", "--basis", "CL3_BASIS", "--bound", "100", "--out", "."])
        .assert()
        .success()
        .stdout(contains("Cl3(1)"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("relation_CL3_BASIS.json")).unwrap()).unwrap();
    assert_eq!(report["basis"], "CL3_BASIS");
    assert!(report["result"]["outcome"].is_string());
}

#[test]
fn report_regenerates_the_table() {
    let dir = tempfile::tempdir().unwrap();
    flintlab(dir.path()).args(["report", "--table", "72", "--digits", "30"]).assert().success();
    let csv = fs::read_to_string(dir.path().join("table_72.csv")).unwrap();
    let row = csv.lines().find(|l| l.starts_with("100000,")).unwrap();
    assert!(row.starts_with("100000,86.1353350,30.3145209,"), "{row}");
    let lerch: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lerch.json")).unwrap()).unwrap();
    assert!(lerch["b"]["re"].as_str().unwrap().starts_with("-27.6424"));
}
