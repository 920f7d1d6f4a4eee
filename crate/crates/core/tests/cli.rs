use std::path::Path;

use cosheaf::io::cli::run_with;
use cosheaf::io::{self, Document};
use cosheaf::topo::{builtin_demos, demo_names, find_demo, DemoInput};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("cosheaf")
        .chain(args.iter().copied())
        .collect();
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn save_demo_input(name: &str, dir: &Path) -> String {
    let demo = find_demo(name).unwrap();
    let d = match demo.input {
        DemoInput::SetPrecosheaf(a) => Document::SetPrecosheaf(a),
        DemoInput::AbPrecosheaf(a) => Document::AbPrecosheaf(a),
        DemoInput::SetPresheaf(a) => Document::SetPresheaf(a),
    };
    let path = dir.join(format!("{name}.json"));
    io::save(&d, &path).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn every_demo_exits_according_to_its_expected_verdict() {
    for demo in builtin_demos() {
        let (code, out, _) = run(&["demo", demo.name]);
        let report: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(report["label"], demo.expected, "{}", demo.name);
        let passed = report["verdict"] == "PASS";
        assert_eq!(code, if passed { 0 } else { 1 }, "{}", demo.name);
        assert!(out.contains("matched"), "{}", demo.name);
    }
    assert_eq!(demo_names().len(), builtin_demos().len());
}

#[test]
fn smooth_fails_on_the_converging_point_with_a_witness_at_the_top() {
    let dir = tempfile::tempdir().unwrap();
    let path = save_demo_input("pt-converging", dir.path());
    let (code, out, _) = run(&["smooth", &path]);
    assert_eq!(code, 1);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["label"], "NOT-SMOOTH");
    assert_eq!(report["witnesses"][0]["object"], "X");
}

#[test]
fn costalk_verdicts_follow_the_point_kind() {
    let dir = tempfile::tempdir().unwrap();
    let path = save_demo_input("pt-converging", dir.path());
    let (code, out, _) = run(&["costalk", &path, "--point", "1/3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("RUDIMENTARY"));
    let (code, _, err) = run(&["costalk", &path, "--point", "nowhere"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

#[test]
fn cosheafify_writes_a_loadable_result() {
    let dir = tempfile::tempdir().unwrap();
    let path = save_demo_input("pt-pseudocircle-not-cosheaf", dir.path());
    let out_path = dir.path().join("sharp.json");
    let (code, _, _) = run(&["cosheafify", &path, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&["check-cosheaf", out_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = run(&["check-cosheaf", &path]);
    assert_eq!(code, 1);
}

#[test]
fn sheafify_and_check_sheaf_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = save_demo_input("constant-presheaf-sheafify", dir.path());
    let out_path = dir.path().join("sheaf.json");
    let (code, _, _) = run(&["sheafify", &path, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["check-sheaf", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(
        &broken,
        r#"{"kind": "site", "objects": ["A", "B", "C"],
        "morphisms": [{"id": "f", "src": "A", "dst": "B"}, {"id": "g", "src": "B", "dst": "C"}, {"id": "h", "src": "A", "dst": "C"}],
        "composition": [["g", "f", "f"]]}"#,
    )
    .unwrap();
    assert_eq!(run(&["validate", broken.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["validate", "/no/such/file.json"]).0, 2);
    assert_eq!(run(&["demo", "no-such-demo"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn wrong_document_kinds_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = save_demo_input("constant-presheaf-sheafify", dir.path());
    let (code, _, err) = run(&["check-cosheaf", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("/kind"), "{err}");
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["oracle-suite", "--seed", "7", "--cases", "10"]);
    let b = run(&["oracle-suite", "--seed", "7", "--cases", "10"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(
        run(&["demo", "pt-converging"]),
        run(&["demo", "pt-converging"])
    );
}
