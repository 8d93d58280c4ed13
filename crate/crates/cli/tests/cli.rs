use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use toricstrat_cli::{main_with_args, EXIT_NOT_SATURATED, EXIT_PARSE, EXIT_USAGE, EXIT_VERIFY};

fn inputs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../inputs")
}

fn umbrella() -> String {
    inputs().join("i1_umbrella.toric").display().to_string()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> toricstrat_cli::Outcome {
    main_with_args(std::iter::once("toricstrat").chain(args.iter().copied()))
}

#[test]
fn umbrella_text_matches_golden() {
    let out = run(&["stratify", &umbrella(), "--format", "text"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, std::fs::read_to_string(golden("umbrella.txt")).unwrap());
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let a = run(&["stratify", &umbrella(), "--format", "json"]);
    let b = run(&["stratify", &umbrella(), "--format", "json", "--threads", "3"]);
    assert_eq!(a, b);
    let i3 = inputs().join("i3_proofreading.toric").display().to_string();
    let v1 = run(&["verify", &i3, "--seed", "11", "--format", "json"]);
    let v2 = run(&["verify", &i3, "--seed", "11", "--format", "json"]);
    assert_eq!(v1.code, 0);
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn text_and_json_share_the_face_table() {
    for name in ["i1_umbrella.toric", "i2.toric"] {
        let path = inputs().join(name).display().to_string();
        let text = run(&["stratify", &path]).stdout;
        let js: Value = serde_json::from_str(&run(&["stratify", &path, "--format", "json"]).stdout).unwrap();
        let faces = js["faces"].as_array().unwrap();
        assert!(text.contains(&format!("faces of P: {}", faces.len())));
        for f in faces {
            let inc: Vec<String> = f["incidence"]
                .as_array()
                .unwrap()
                .iter()
                .map(|i| format!("a{}", i.as_u64().unwrap()))
                .collect();
            let line = format!(
                "[{}]  dim {}  d = {}  e = {}  fiber {}",
                inc.join(","),
                f["dim"],
                f["d"],
                f["e"],
                f["fiber_dim"]
            );
            assert!(text.contains(&line), "{line} missing from text output");
        }
    }
}

#[test]
fn json_schema_keys_in_order() {
    let out = run(&["stratify", &umbrella(), "--format", "json"]).stdout;
    let js: Value = serde_json::from_str(&out).unwrap();
    let order = |keys: &[&str], text: &str| {
        let pos: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{keys:?} out of order");
    };
    order(&["nu", "A", "labels", "faces", "X_flag", "Y_flag", "provenance"], &out);
    let first_face = &out[out.find("\"incidence\"").unwrap()..];
    order(
        &["incidence", "dim", "d", "e", "fiber_dim", "x_components", "y_components"],
        first_face,
    );
    assert_eq!(js["A"][0][2], "2");
    assert_eq!(js["X_flag"]["1"].as_array().unwrap().len(), 2);
    assert_eq!(js["X_flag"]["1"][0]["presentation"], "lattice-basis");
    assert_eq!(js["provenance"]["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_umbrella_passes() {
    let out = run(&["verify", &umbrella(), "--seed", "7", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let js: Value = serde_json::from_str(&out.stdout).unwrap();
    for c in js["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass");
        for key in ["name", "status", "worst_residual", "samples"] {
            assert!(c.get(key).is_some());
        }
    }
}

#[test]
fn empty_ideal_gives_simplex_and_coordinate_flag() {
    let out = run(&["stratify", &golden("empty.toric").display().to_string(), "--format", "json"]);
    let js: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(js["faces"].as_array().unwrap().len(), 3);
    let levels: Vec<usize> = ["0", "1", "2"]
        .iter()
        .map(|d| js["X_flag"][d].as_array().unwrap().len())
        .collect();
    assert_eq!(levels, [1, 2, 1]);
}

#[test]
fn faces_lists_both_lattices() {
    let js: Value =
        serde_json::from_str(&run(&["faces", &umbrella(), "--format", "json"]).stdout).unwrap();
    assert_eq!(js["polytope"]["f_vector"], serde_json::json!([3, 3, 1]));
    assert_eq!(js["cone"]["faces"].as_array().unwrap().len(), 4);
}

#[test]
fn transport_subcommand() {
    let out = run(&["transport", &umbrella(), "--from", "1", "--to", "4", "--format", "json"]);
    assert_eq!(out.code, 0);
    let js: Value = serde_json::from_str(&out.stdout).unwrap();
    let s: Vec<f64> = js["scaling"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((s[1] * s[1] / (s[0] * s[0]) - 0.25).abs() < 1e-12);
    assert_eq!(run(&["transport", &umbrella(), "--from", "1", "--to", "0"]).code, EXIT_VERIFY);
    assert_eq!(run(&["transport", &umbrella(), "--from", "1,2", "--to", "3,4"]).code, EXIT_USAGE);
}

#[test]
fn error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toric");
    std::fs::write(&bad, "vars: x\ngens: x^2 - 3*x\n").unwrap();
    assert_eq!(run(&["stratify", bad.to_str().unwrap()]).code, EXIT_PARSE);

    let sq = dir.path().join("sq.toric");
    std::fs::write(&sq, "vars: x\nparams: c\ngens: x^2 - c^2\n").unwrap();
    let out = run(&["stratify", sq.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_NOT_SATURATED);
    assert!(out.stderr.contains("--force-saturate"));
    assert_eq!(run(&["stratify", sq.to_str().unwrap(), "--force-saturate"]).code, 0);

    assert_eq!(run(&["stratify"]).code, EXIT_USAGE);
    assert_eq!(run(&["stratify", "/nonexistent/file.toric"]).code, EXIT_USAGE);
    assert_eq!(run(&["--help"]).code, 0);

    let plus = dir.path().join("plus.toric");
    std::fs::write(&plus, "vars: x\nparams: c\ngens: x + c\n").unwrap();
    assert_eq!(run(&["verify", plus.to_str().unwrap()]).code, EXIT_VERIFY);
}

#[test]
fn side_exports_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let m2 = dir.path().join("u.m2");
    let dot = dir.path().join("u.dot");
    let out = run(&[
        "stratify",
        &umbrella(),
        "--export-m2",
        m2.to_str().unwrap(),
        "--export-dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0);
    let m2 = std::fs::read_to_string(m2).unwrap();
    assert!(m2.contains("needsPackage \"WhitneyStratifications\""));
    assert_eq!(
        std::fs::read_to_string(dot).unwrap(),
        run(&["export-dot", &umbrella()]).stdout
    );
}

#[test]
fn binary_exit_status_and_stdout() {
    let bin = env!("CARGO_BIN_EXE_toricstrat");
    let out = Command::new(bin).args(["stratify", &umbrella()]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        std::fs::read_to_string(golden("umbrella.txt")).unwrap()
    );
    let out = Command::new(bin).args(["stratify", "-"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PARSE));
}
