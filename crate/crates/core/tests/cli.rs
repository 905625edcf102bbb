use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use popan::{fixtures, native, verify_plan, EdgeKind, GraphBuilder, Mode, PopanEdge};
use tempfile::TempDir;

const GENERIC_AML: &str = include_str!("data/generic.aml");

fn popan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_popan"))
        .args(args)
        .env("POPAN_NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn validate_fixture_succeeds() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "ev.json",
        &native::graph_to_native(&fixtures::ev_battery()),
    );
    let out = popan(&["validate", s(&path)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("ok: 0 error(s)"));
    assert!(!stdout(&out).contains('\x1b'));
}

#[test]
fn validate_structured_lists_findings_and_fails() {
    let dir = TempDir::new().unwrap();
    let mut b = GraphBuilder::from(&fixtures::generic());
    b.add_edge(PopanEdge::new(
        "bad",
        EdgeKind::Physical,
        "Product1",
        "Product2",
    ))
    .unwrap();
    let path = write(&dir, "bad.json", &native::graph_to_native(&b.build()));
    let out = popan(&["validate", s(&path), "--format", "structured"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["ok"], false);
    let findings = report["findings"].as_array().unwrap();
    assert!(findings
        .iter()
        .any(|f| f["code"] == "E_ARROW" && f["subjectId"] == "bad"));
}

#[test]
fn unreadable_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.json");
    assert_eq!(popan(&["validate", s(&missing)]).status.code(), Some(2));
    let garbage = write(&dir, "junk.json", "{ not json");
    assert_eq!(popan(&["validate", s(&garbage)]).status.code(), Some(2));
    let truncated = write(&dir, "cut.aml", &GENERIC_AML[..400]);
    let out = popan(&["plan", s(&truncated), "--mode", "assembly"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(popan(&["plan"]).status.code(), Some(2));
    assert_eq!(popan(&["frobnicate"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    let result = popan(&["fixture", "foo", "--out", s(&out)]);
    assert_eq!(result.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn structured_plan_passes_verification() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "generic.aml", GENERIC_AML);
    let out_path = dir.path().join("plan.json");
    for mode in [Mode::Assembly, Mode::Disassembly] {
        let out = popan(&[
            "plan",
            s(&input),
            "--mode",
            mode.as_str(),
            "--format",
            "structured",
            "--out",
            s(&out_path),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let plan = native::plan_from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
        assert_eq!(plan.mode, mode);
        assert!(verify_plan(&fixtures::generic(), mode, &plan).ok);
    }
}

#[test]
fn plan_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "ev.json",
        &native::graph_to_native(&fixtures::ev_battery()),
    );
    for format in ["text", "structured", "graphdesc"] {
        let args = [
            "plan",
            s(&input),
            "--mode",
            "disassembly",
            "--format",
            format,
        ];
        let first = popan(&args);
        let second = popan(&args);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout, "{format}");
    }
    let text = stdout(&popan(&["plan", s(&input), "--mode", "disassembly"]));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].contains("Screwing BoltsM6"), "{text}");
    assert!(lines[2].contains("Manipulation Lid"), "{text}");
}

#[test]
fn graphdesc_is_dot() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "generic.aml", GENERIC_AML);
    let out = popan(&[
        "plan",
        s(&input),
        "--mode",
        "assembly",
        "--format",
        "graphdesc",
    ]);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph precedence {"));
    assert!(dot.contains("SQ1 (sequence)"));
    assert!(dot.trim_end().ends_with('}'));
}

#[test]
fn cycle_exits_one_and_names_edges() {
    let dir = TempDir::new().unwrap();
    let mut b = GraphBuilder::from(&fixtures::ev_battery());
    b.add_edge(PopanEdge::assembly(
        "SQ-back",
        EdgeKind::SequenceProcess,
        "Screwing",
        "Manipulation",
    ))
    .unwrap();
    let input = write(&dir, "cyclic.json", &native::graph_to_native(&b.build()));
    let out = popan(&["plan", s(&input), "--mode", "disassembly"]);
    assert_eq!(out.status.code(), Some(1));
    let message = stderr(&out);
    assert!(
        message.contains("SQ-back") && message.contains("SQ1"),
        "{message}"
    );
    assert!(stdout(&out).is_empty());
}

#[test]
fn invalid_graph_blocks_planning() {
    let dir = TempDir::new().unwrap();
    let mut b = GraphBuilder::from(&fixtures::generic());
    b.add_node(popan::PopanNode::product(
        "Orphan",
        popan::ProductKind::ElementaryProduct,
    ))
    .unwrap();
    let input = write(&dir, "orphan.json", &native::graph_to_native(&b.build()));
    let out = popan(&["plan", s(&input), "--mode", "assembly"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("E_NOPROC"));
}

#[test]
fn native_aml_native_is_lossless() {
    let dir = TempDir::new().unwrap();
    let original = native::graph_to_native(&fixtures::ev_battery());
    let json = write(&dir, "in.json", &original);
    let aml = dir.path().join("mid.aml");
    let back = dir.path().join("out.json");
    assert_eq!(
        popan(&["convert", s(&json), s(&aml)]).status.code(),
        Some(0)
    );
    assert_eq!(
        popan(&["convert", s(&aml), s(&back)]).status.code(),
        Some(0)
    );
    assert_eq!(std::fs::read_to_string(back).unwrap(), original);
}

#[test]
fn golden_aml_native_aml_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let aml = write(&dir, "in.aml", GENERIC_AML);
    let json = dir.path().join("mid.json");
    let again = dir.path().join("out.aml");
    assert_eq!(
        popan(&["convert", s(&aml), s(&json)]).status.code(),
        Some(0)
    );
    assert_eq!(
        popan(&["convert", s(&json), s(&again)]).status.code(),
        Some(0)
    );
    assert_eq!(std::fs::read_to_string(again).unwrap(), GENERIC_AML);
}

#[test]
fn fixture_command_writes_both_formats() {
    let dir = TempDir::new().unwrap();
    let aml = dir.path().join("g.aml");
    let json = dir.path().join("g.json");
    assert_eq!(
        popan(&["fixture", "generic", "--out", s(&aml), "--format", "aml"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        popan(&["fixture", "generic", "--out", s(&json)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(std::fs::read_to_string(aml).unwrap(), GENERIC_AML);
    let graph = native::graph_from_native(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(graph, fixtures::generic());
}

#[test]
fn ev_native_matches_golden() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("ev.json");
    let out = popan(&["fixture", "ev-battery", "--out", s(&json)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(json).unwrap(),
        include_str!("data/ev-battery.json")
    );
}
