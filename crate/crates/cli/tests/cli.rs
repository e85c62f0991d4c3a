use coxwall::complexes::CellCensus;
use coxwall::coxeter::{BallExport, CoxeterSystem, MatrixFile};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn coxwall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxwall")).args(args).env_remove("COXWALL_MAX_VERTICES").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

#[test]
fn ball_json_round_trips_through_lib_types() {
    let out = coxwall(&["ball", "--preset", "affine-A2", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let ball: BallExport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(ball.radius, 3);
    assert_eq!(ball.vertices.len(), 1 + 3 + 6 + 9);
    assert_eq!(serde_json::to_value(&ball).unwrap(), json(&out));
    assert!(stdout(&out).ends_with("}\n"));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["ball", "--preset", "H3-bar", "--radius", "3"][..],
        &["census", "--preset", "W6-K33", "--radius", "2"],
        &["autom", "--preset", "W6-K33", "--s", "s0", "--radius", "4"],
        &["walls-check", "--preset", "affine-A2", "--radius", "4", "--sample", "200", "--seed", "3"],
    ] {
        assert_eq!(coxwall(args).stdout, coxwall(args).stdout, "{args:?}");
    }
}

#[test]
fn system_file_input() {
    let path = fixture("bourdon_4_3.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let file: MatrixFile = serde_json::from_str(&text).unwrap();
    assert_eq!(file.rank, 6);
    let sys = CoxeterSystem::from_json(&text).unwrap();
    assert_eq!(sys.rank(), 6);

    let out = coxwall(&["rigid", "--system", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "not rigid");
    assert_eq!(json(&out)["rigid"], false);
    assert_eq!(coxwall(&["rigid", "--preset", "A3"]).status.code(), Some(0));

    let out = coxwall(&["hyperbolic", "--system", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "W(4, K33) contains Z^2");
    assert!(json(&out)["witness"].is_object());
}

#[test]
fn building_matches_graph_input() {
    let direct = coxwall(&["building", "--p", "4", "--q", "3"]);
    assert_eq!(direct.status.code(), Some(0));
    assert_eq!(stdout(&direct), std::fs::read_to_string(fixture("bourdon_4_3.json")).unwrap());
    let graph = fixture("k33.json");
    let via_graph = coxwall(&["building", "--graph", graph.to_str().unwrap(), "--k", "4"]);
    assert_eq!(via_graph.status.code(), Some(0));
    let a: MatrixFile = serde_json::from_slice(&direct.stdout).unwrap();
    let b: MatrixFile = serde_json::from_slice(&via_graph.stdout).unwrap();
    assert_eq!(a.labels, b.labels);
}

#[test]
fn census_parses_as_lib_type() {
    let out = coxwall(&["building", "--p", "6", "--q", "3", "--radius", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let census: CellCensus = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(census.radius, 1);
    // 1 + 6 vertices; each generator's edge coset is met once from the identity.
    assert_eq!(census.entries[0].count, 7);
}

#[test]
fn hyperbolicity_exit_codes() {
    assert_eq!(coxwall(&["hyperbolic", "--preset", "H3-bar"]).status.code(), Some(0));
    let out = coxwall(&["hyperbolic", "--preset", "affine-A2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["witness"]["kind"], "affine");
}

#[test]
fn geodesic_exit_codes() {
    let ok = coxwall(&["geodesic", "--preset", "affine-A2", "--word", "s t u"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["geodesic"], true);
    let bad = coxwall(&["geodesic", "--preset", "affine-A2", "--word", "s t s t"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["reduced"], false);
    assert_eq!(coxwall(&["geodesic", "--preset", "affine-A2", "--word", "s x"]).status.code(), Some(2));
}

#[test]
fn walls_check_passes() {
    let out = coxwall(&["walls-check", "--preset", "W6-K33", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn automorphism_verification() {
    let out = coxwall(&["autom", "--preset", "W6-K33", "--s", "0", "--radius", "4", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == true));
    assert_eq!(v["valid_radius"], 3);

    let dir = tempfile::tempdir().unwrap();
    let perm = dir.path().join("perm.json");
    std::fs::write(&perm, "[0, 2, 1, 3, 4, 5]").unwrap();
    let explicit = coxwall(&["autom", "--preset", "W6-K33", "--s", "s0", "--f", perm.to_str().unwrap(), "--radius", "4"]);
    assert_eq!(explicit.status.code(), Some(0));

    std::fs::write(&perm, "[1, 0, 2, 3, 4, 5]").unwrap();
    let moved = coxwall(&["autom", "--preset", "W6-K33", "--s", "s0", "--f", perm.to_str().unwrap()]);
    assert_eq!(moved.status.code(), Some(2), "f must fix s");
    assert_eq!(coxwall(&["autom", "--preset", "A3", "--s", "s"]).status.code(), Some(2));
}

#[test]
fn table_and_andreev() {
    let out = coxwall(&["table", "--rank", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 8);
    assert_eq!(coxwall(&["table", "--rank", "3", "--check", "--n-cap", "8"]).status.code(), Some(0));
    let cube = coxwall(&["table", "--cellulation", "cube", "--angles", "pi/2,pi/2,pi/2"]);
    assert_eq!(cube.status.code(), Some(1));
    assert_eq!(json(&cube)["condition"], 3);
    assert_eq!(coxwall(&["table", "--rank", "5"]).status.code(), Some(2));
}

#[test]
fn cell_verify() {
    let out = coxwall(&["cell", "--preset", "B3", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["face_vector"], serde_json::json!([48, 72, 26, 1]));
    assert_eq!(coxwall(&["cell", "--preset", "affine-A2"]).status.code(), Some(2));
}

#[test]
fn nerve_of_a_triangle_group() {
    let v = json(&coxwall(&["nerve", "--preset", "affine-A2"]));
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["maximal_faces"].as_array().unwrap().len(), 3);
}

#[test]
fn out_file_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.dot");
    let out = coxwall(&["export-dot", "--preset", "A2", "--radius", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("graph"));
    assert_eq!(dot.matches("label=").count(), 6 + 6);
    assert_eq!(coxwall(&["ball", "--preset", "A2", "--radius", "3", "--format", "dot"]).stdout, dot.into_bytes());
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(coxwall(&["ball", "--preset", "nope", "--radius", "1"]).status.code(), Some(2));
    assert_eq!(coxwall(&["ball", "--radius", "1"]).status.code(), Some(2));
    assert_eq!(coxwall(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(coxwall(&["building", "--p", "5", "--q", "3"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"rank": 2, "labels": [[1, 3], [4, 1]]}"#).unwrap();
    assert_eq!(coxwall(&["nerve", "--system", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn vertex_limit_exits_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_coxwall"))
        .args(["ball", "--preset", "affine-A2", "--radius", "6"])
        .env("COXWALL_MAX_VERTICES", "20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));
}
