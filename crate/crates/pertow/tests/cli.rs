//! End-to-end CLI tests: file formats, exit codes, and report determinism.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pertow")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    (code, String::from_utf8_lossy(&out.stdout).to_string())
}

#[test]
fn reisner_exit_codes_follow_the_math() {
    let rp2 = data("rp2.cplx");
    let rp2 = rp2.to_str().unwrap();
    let (code, out) = run(&["reisner", rp2, "-p", "2"]);
    assert_eq!(code, 1, "not CM is a mathematical no: exit 1");
    assert!(out.contains("witness"));
    let (code, _) = run(&["reisner", rp2, "-p", "3"]);
    assert_eq!(code, 0);
    let (code, _) = run(&["reisner", rp2, "-p", "5"]);
    assert_eq!(code, 0);
}

#[test]
fn check_tower_verifies_the_zp_tower() {
    let tower = data("zp.tower");
    let (code, out) = run(&["check-tower", tower.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("verified-on-window"));
    assert!(out.contains("assumed"), "(e) is reported as assumed");
}

#[test]
fn compare_tilt_on_the_two_point_tower() {
    let tower = data("twopoint.tower");
    let (code, out) = run(&["compare-tilt", tower.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("H_0: Z/2 vs Z/2"));
    assert!(out.contains("H_1: Z/2 vs Z/2"));
}

#[test]
fn glue_and_decompose_and_tilt_run_clean() {
    for (cmd, file) in [
        ("glue", "glue_pb.json"),
        ("decompose", "twopoint.tower"),
        ("tilt", "twopoint.tower"),
    ] {
        let path = data(file);
        let (code, out) = run(&[cmd, path.to_str().unwrap()]);
        assert_eq!(code, 0, "{cmd}: {out}");
    }
}

#[test]
fn koszul_subcommand_accepts_pillar_keyword() {
    let ring = data("twopoint.ring");
    let (code, out) = run(&["koszul", ring.to_str().unwrap(), "--sequence", "pillar,x"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("H_1 = Z/2"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_tower = dir.path().join("bad.tower");
    std::fs::write(&bad_tower, "{ not json").unwrap();
    let (code, out) = run(&["check-tower", bad_tower.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("line"), "parse errors carry a position: {out}");

    let bad_cplx = dir.path().join("bad.cplx");
    let mut f = std::fs::File::create(&bad_cplx).unwrap();
    writeln!(f, "v1 v2").unwrap();
    writeln!(f, "v1 v3").unwrap(); // unknown vertex
    drop(f);
    let (code, _) = run(&["reisner", bad_cplx.to_str().unwrap(), "-p", "2"]);
    assert_eq!(code, 2);

    let (code, _) = run(&["reisner", data("rp2.cplx").to_str().unwrap(), "-p", "4"]);
    assert_eq!(code, 2, "a composite modulus is an operational error");
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let tower = data("twopoint.tower");
    let args = ["--format", "json", "compare-tilt", tower.to_str().unwrap()];
    let (code_a, out_a) = run(&args);
    let (code_b, out_b) = run(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_a, code_b);
    assert_eq!(out_a, out_b, "reports must be deterministic");
    let parsed: serde_json::Value = serde_json::from_str(&out_a).expect("valid JSON");
    assert_eq!(parsed["schema_version"], 1);
    assert_eq!(parsed["command"], "compare-tilt");
    assert!(parsed["window"]["D"].is_u64());
}

#[test]
fn sabotaged_tower_file_fails_with_exit_1() {
    // a tower whose torsion is not killed by p fails axiom (g)
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deep.tower");
    std::fs::write(
        &path,
        r#"{
  "ring": {
    "prime": 2, "precision": 4, "level": 0, "characteristic": "mixed",
    "variables": ["x"], "generators": [ { "p_exp": 2, "x_exps": [1] } ]
  },
  "levels": 2,
  "window": { "D": 6, "N": 4 }
}"#,
    )
    .unwrap();
    let (code, out) = run(&["check-tower", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("witness"));
}
