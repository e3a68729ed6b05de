//! End-to-end checks of the `km3` binary: exit codes, output determinism,
//! file output, and the fault-injection path.

use std::process::Command;

fn km3(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_km3"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn invariants_happy_path_and_usage_error() {
    let (stdout, _, code) = km3(&["invariants", "14"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["results"]["principal_polarization"]["closed_form"], true);

    let (_, stderr, code) = km3(&["invariants", "15"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("0 or 2 mod 6"), "stderr: {stderr}");

    // Unknown arguments are also usage errors.
    let (_, _, code) = km3(&["invariants"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["invariants", "20"],
        vec!["moduli", "-84", "--reps"],
        vec!["tables", "--parity", "2", "--kmax", "6"],
        vec!["order", "--dh", "10", "--mu", "3,1"],
    ] {
        let (a, _, ca) = km3(&args);
        let (b, _, cb) = km3(&args);
        assert_eq!(ca, 0, "args = {args:?}");
        assert_eq!(cb, 0);
        assert_eq!(a, b, "args = {args:?}");
    }
}

#[test]
fn count_exit_codes() {
    let (_, _, code) = km3(&["count", "20"]);
    assert_eq!(code, 0);
    // Matrix-algebra case: deferred, exit 3.
    let (stdout, _, code) = km3(&["count", "2"]);
    assert_eq!(code, 3);
    assert!(stdout.contains("unsupported"));
    // Non-square-free level sharing a factor with the discriminant.
    let (_, _, code) = km3(&["count", "80"]);
    assert_eq!(code, 3);
}

#[test]
fn moduli_reports() {
    let (stdout, _, code) = km3(&["moduli", "-6"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["results"]["num_components"], 1);

    let (stdout, _, code) = km3(&["moduli", "0", "--reps"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["results"]["num_components"], 1);
    assert_eq!(
        v["results"]["representatives"][0]["gamma_coords"],
        serde_json::json!([1, -1, 1, -1])
    );
}

#[test]
fn tables_csv_contract() {
    let (stdout, _, code) = km3(&["tables", "--parity", "0", "--kmax", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "k,lx_sq,num_components,genus_size\n1,-6,1,1\n2,-12,1,1\n");
    let (_, _, code) = km3(&["tables", "--parity", "0", "--kmax", "31"]);
    assert_eq!(code, 2);
    let (_, _, code) = km3(&["tables", "--parity", "1", "--kmax", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("km3-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let (stdout, _, code) = km3(&["invariants", "12", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(stdout, written);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_passes_and_detects_injected_fault() {
    let (stdout, _, code) = km3(&["selftest"]);
    assert_eq!(code, 0, "stdout: {stdout}");
    assert!(stdout.contains("PASS word-identities"));
    assert!(stdout.trim_end().ends_with("selftest: ok"));

    let (stdout, _, code) = km3(&["selftest", "--inject-fault", "tau1"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("FAIL word-identities"), "stdout: {stdout}");
    assert!(stdout.contains("tau1"), "failure must name the identity");
}

#[test]
fn order_rejects_bad_mu() {
    let (_, stderr, code) = km3(&["order", "--dh", "10", "--mu", "nope"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("mu"), "stderr: {stderr}");
    let (_, _, code) = km3(&["order", "--dh", "10", "--mu", "0,0"]);
    assert_eq!(code, 2);
}
