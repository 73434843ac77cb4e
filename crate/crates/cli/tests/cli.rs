use std::path::PathBuf;
use std::process::Command;

use semifree::fixtures;
use semifree::linalg::rint;
use semifree::polytope::slice_polygon;
use semifree::reduced_space::SliceParam;
use semifree_cli::render::render_polygon;
use semifree_cli::report::run_report;
use semifree_cli::scenario::{bundled, parse_scenario, ScenarioError, Scenario};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semifree"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semifree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bundled_fixtures_parse_from_disk() {
    let s = parse_scenario(&fixture("example-2.1.scenario")).unwrap();
    assert!(s.polytopes.contains_key("cube"));
    assert!(s.matrices.contains_key("twist"));
    assert!(s.gluings.contains_key("example-2.1-swap"));
    let s = parse_scenario(&fixture("example-2.9.scenario")).unwrap();
    assert!(s.polytopes.contains_key("P1") && s.polytopes.contains_key("P2"));
}

#[test]
fn truncated_file_reports_position() {
    let text = std::fs::read_to_string(fixture("example-2.9.scenario")).unwrap();
    let path = scratch("truncated.scenario");
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    match parse_scenario(&path) {
        Err(ScenarioError::Malformed { line, .. }) => assert!(line > 1),
        other => panic!("expected a positioned error, got {other:?}"),
    }
    let out = bin().args(["run", "--scenario"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn report_bytes_are_stable() {
    let path = fixture("example-2.1.scenario");
    let a = bin().args(["run", "--scenario"]).arg(&path).output().unwrap();
    let b = bin().args(["run", "--scenario"]).arg(&path).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let direct = run_report(&bundled("example-2.1").unwrap()).to_json();
    assert_eq!(String::from_utf8(a.stdout).unwrap(), direct);
}

#[test]
fn every_fixture_verifies() {
    for name in ["example-2.1", "example-2.9", "tilted-cube", "monotone"] {
        let out = bin().args(["verify", name]).output().unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert!(!bin().args(["verify", "no-such-fixture"]).output().unwrap().status.success());
}

#[test]
fn failing_expectation_sets_exit_status() {
    let path = scratch("failing.scenario");
    std::fs::write(
        &path,
        r#"{
          "polytopes": { "c": { "fixture": "product-cube" } },
          "circles": { "xi": [1, 1, 0] },
          "analyses": [
            { "kind": "restrict", "polytope": "c", "circle": "xi", "expect_semifree": false },
            { "kind": "rigidity", "k": [2] }
          ]
        }"#,
    )
    .unwrap();
    let out = bin().args(["run", "--scenario"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ok"], false);
    assert_eq!(report["analyses"][0]["ok"], false);
    assert_eq!(report["analyses"][1]["ok"], true);
}

#[test]
fn analysis_errors_are_collected() {
    let s = Scenario::from_str(
        r#"{
          "polytopes": { "c": { "fixture": "product-cube" } },
          "circles": { "bad": [2, 0, 0], "xi": [1, 1, 0] },
          "analyses": [
            { "kind": "fpd", "polytope": "c", "circle": "bad" },
            { "kind": "check-delzant", "polytope": "c", "expect_ok": true }
          ]
        }"#,
    )
    .unwrap();
    let rep = run_report(&s);
    assert!(!rep.ok);
    assert!(rep.analyses[0].error.is_some());
    assert!(rep.analyses[1].ok);
}

#[test]
fn empty_analysis_list_succeeds() {
    let path = scratch("empty.scenario");
    std::fs::write(&path, r#"{ "analyses": [] }"#).unwrap();
    let out = bin().args(["run", "--scenario"]).arg(&path).output().unwrap();
    assert!(out.status.success());
}

#[test]
fn subcommands_take_inline_inputs() {
    let out = bin().args(["emin", "--form", "9;1,1,1"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["analyses"][0]["result"]["emin"], serde_json::json!(["E1", "E2", "E3"]));

    let path = fixture("tilted-cube.scenario");
    let out = bin()
        .args(["slice", "--polytope", "cube", "--circle", "xi", "--interval", "0,2", "--scenario"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["analyses"][0]["result"]["model"], "CP2#3");

    let out = bin().args(["wall", "--polytope", "cube", "--circle", "xi", "--level", "1/2", "--scenario"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "non-critical level must fail");
}

#[test]
fn pentagon_has_red_top_edge() {
    let path = fixture("example-2.9.scenario");
    let run = || bin().args(["render", "--polytope", "P1", "--circle", "xi", "--level", "0", "--scenario"]).arg(&path).output().unwrap();
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert_eq!(svg.matches("<line").count(), 5);
    let red: Vec<&str> = svg.lines().filter(|l| l.contains("#d62728")).collect();
    assert_eq!(red.len(), 1);
    // Top of the picture: both ends at the smallest y coordinate.
    assert!(red[0].contains(r#"y1="40""#) && red[0].contains(r#"y2="40""#), "{}", red[0]);
}

#[test]
fn cube_slice_is_a_rectangle() {
    let eps = fixtures::default_epsilon();
    let q = slice_polygon(&fixtures::product_cube(&eps), &fixtures::product_cube_xi(), SliceParam::Fixed(rint(1) / rint(2))).unwrap();
    let svg = render_polygon(&q, &(rint(1) / rint(2)), &[], "cube").unwrap();
    assert_eq!(svg.matches("<line").count(), 4);
    assert_eq!(svg, render_polygon(&q, &(rint(1) / rint(2)), &[], "cube").unwrap());
}

#[test]
fn render_rejects_solid_input() {
    let path = fixture("example-2.1.scenario");
    let out = bin().args(["render", "--polytope", "cube", "--scenario"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["render", "--polytope", "slab", "--scenario"]).arg(&path).output().unwrap();
    assert!(out.status.success());
}
