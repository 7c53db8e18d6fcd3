//! End-to-end checks of the command-line binary: subcommands, exit codes
//! and output files.

use std::process::Command;

fn veech() -> Command {
    Command::new(env!("CARGO_BIN_EXE_veech"))
}

#[test]
fn member_exit_codes() {
    let ok = veech()
        .args(["member", "L", "--matrix", "1,0;2,1", "--quiet"])
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));
    let no = veech()
        .args(["member", "L", "--matrix", "1,0;1,1", "--quiet"])
        .status()
        .unwrap();
    assert_eq!(no.code(), Some(2));
    let err = veech()
        .args(["member", "L", "--matrix", "2,0;0,1", "--quiet"])
        .status()
        .unwrap();
    assert_eq!(err.code(), Some(1), "determinant two is an error");
}

#[test]
fn compute_l_terminates_with_outputs() {
    let dir = std::env::temp_dir().join("veech-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let json_path = dir.join("l.json");
    let svg_path = dir.join("l.svg");
    let status = veech()
        .args([
            "compute",
            "L",
            "--max-norm",
            "8",
            "--emit-json",
            json_path.to_str().unwrap(),
            "--emit-svg",
            svg_path.to_str().unwrap(),
            "--quiet",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0), "terminated run exits zero");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["status"], "terminated");
    assert_eq!(doc["signature"]["genus"], 0);
    assert_eq!(doc["signature"]["cusps"], 2);
    assert_eq!(doc["contains_minus_identity"], true);
    let area = doc["domain_area"]["mid"].as_f64().unwrap();
    assert!((area - std::f64::consts::PI).abs() < 1e-9);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("circle"), "agreement ball rendered");

    // determinism: rendering twice gives identical bytes
    let svg_path2 = dir.join("l2.svg");
    veech()
        .args([
            "compute",
            "L",
            "--max-norm",
            "8",
            "--emit-svg",
            svg_path2.to_str().unwrap(),
            "--quiet",
        ])
        .status()
        .unwrap();
    assert_eq!(svg, std::fs::read_to_string(&svg_path2).unwrap());
}

#[test]
fn compute_norm_bound_reached_exits_two() {
    let status = veech()
        .args(["compute", "mcmullen-genus2", "--max-norm", "2", "--quiet"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn staples_and_segments_stream() {
    let out = veech().args(["staples", "hex-torus"]).output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["count"], 3);

    let out = veech()
        .args(["segments", "square-torus", "--radius", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout)
        .unwrap()
        .lines()
        .filter(|l| !l.is_empty())
        .collect();
    // primitive vectors of norm <= 2: 8 of them
    assert_eq!(lines.len(), 8);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["holonomy"].is_array());
    }
}

#[test]
fn domain_subcommand_builds_polygon() {
    let out = veech()
        .args([
            "domain",
            "square-torus",
            "--matrices",
            "1,1;0,1 1,-1;0,1",
            "--norm-bound",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["domain"]["has_free_boundary"], true);
    assert_eq!(doc["domain"]["sides"].as_array().unwrap().len(), 2);
}

#[test]
fn surface_file_roundtrip() {
    let dir = std::env::temp_dir().join("veech-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("torus.json");
    std::fs::write(
        &path,
        r#"{
            "field": {"min_poly": [0, 1], "embedding": ["-1", "1"]},
            "polygons": [[["0","0"],["1","0"],["1","1"],["0","1"]]],
            "gluings": [[[0,0],[0,2]], [[0,1],[0,3]]],
            "marked": [[0,0]]
        }"#,
    )
    .unwrap();
    let out = veech()
        .args(["staples", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["count"], 2);

    // malformed gluing: error naming the offending edge pair
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{
            "field": {"min_poly": [0, 1], "embedding": ["-1", "1"]},
            "polygons": [[["0","0"],["1","0"],["1","1"],["0","1"]]],
            "gluings": [[[0,0],[0,1]], [[0,2],[0,3]]]
        }"#,
    )
    .unwrap();
    let out = veech().args(["staples", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("(0,0)") && msg.contains("(0,1)"), "diagnostic names the pair: {msg}");
}
