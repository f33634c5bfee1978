mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::{classes, fixtures};

fn sketch2ui(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sketch2ui")).args(args).output().unwrap()
}

fn run_pipeline(cmd: &str, detections: &Path, out: &Path, extra: &[&str]) -> Output {
    let classes = classes();
    let mut args = vec![
        cmd,
        "--detections",
        detections.to_str().unwrap(),
        "--classes",
        classes.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    sketch2ui(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn compile_writes_ir_and_html() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_pipeline("compile", &fixtures().join("no_overlap.csv"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("s1.ir.json").is_file());
    assert!(dir.path().join("s1.html").is_file());
    let text = stdout(&o);
    assert!(text.contains("sketch=s1 "), "{text}");
    assert!(text.contains("elements_in=4 below_threshold=0 retained=4 removed=0"), "{text}");
    assert!(!text.contains("\nremoved "), "{text}");
}

#[test]
fn android_target_writes_xml() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_pipeline("compile", &fixtures().join("no_overlap.csv"), dir.path(), &["--target", "android"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(fs::read_to_string(dir.path().join("s1.xml")).unwrap().starts_with("<?xml"));
}

#[test]
fn resolve_logs_the_removed_label() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_pipeline("resolve", &fixtures().join("checkbox_label.csv"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("class=label"), "{text}");
    assert!(text.contains("reason=\"duplicate: priority\" kept=checkbox"), "{text}");
    let ir = fs::read_to_string(dir.path().join("checkbox.ir.json")).unwrap();
    assert!(ir.contains("\"Checkbox\"") && !ir.contains("\"Label\""), "{ir}");
    assert!(!dir.path().join("checkbox.html").exists());
}

#[test]
fn json_report_is_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_pipeline("resolve", &fixtures().join("checkbox_label.csv"), dir.path(), &["--json-report"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["sketches"][0]["removals"][0]["reason"], "duplicate: priority");
    assert_eq!(report["summary"]["removed"], 1);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let o = run_pipeline("compile", &fixtures().join("golden").join("survey.csv"), dir.path(), &[]);
        assert_eq!(o.status.code(), Some(0));
    }
    for name in ["survey.ir.json", "survey.html"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
}

#[test]
fn empty_detections_exit_1_naming_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "# nothing here\n").unwrap();
    let o = run_pipeline("compile", &empty, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty.csv"), "{}", stderr(&o));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn malformed_line_reports_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "a.jpg,0,0,10,10,button\na.jpg,10,0,5,10,button\n").unwrap();
    let o = run_pipeline("compile", &bad, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_pipeline("compile", &dir.path().join("absent.csv"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let det = fixtures().join("no_overlap.csv");
    assert_eq!(run_pipeline("compile", &det, dir.path(), &["--target", "ios"]).status.code(), Some(1));
    assert_eq!(run_pipeline("compile", &det, dir.path(), &["--confidence", "1.5"]).status.code(), Some(1));
    assert_eq!(sketch2ui(&["compile"]).status.code(), Some(1));
    assert_eq!(sketch2ui(&["--help"]).status.code(), Some(0));
}

#[test]
fn confidence_threshold_filters_before_resolution() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_pipeline("compile", &fixtures().join("golden").join("gallery.csv"), dir.path(), &[]);
    assert!(stdout(&o).contains("elements_in=6 below_threshold=1 retained=6"), "{}", stdout(&o));
    let o = run_pipeline("compile", &fixtures().join("golden").join("gallery.csv"), dir.path(), &["--confidence", "0"]);
    assert!(stdout(&o).contains("elements_in=7 below_threshold=0 retained=7"), "{}", stdout(&o));
}

#[test]
fn loss_prints_reference_point() {
    let o = sketch2ui(&["loss", "--x", "0.9", "--z", "+1", "--alpha", "0.25", "--gamma", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("fl=2.6340e-4"), "{}", stdout(&o));
    let o = sketch2ui(&["loss", "--x", "0.1", "--z", "-1"]);
    assert!(stdout(&o).contains("fl=7.9020e-4"), "{}", stdout(&o));
}

#[test]
fn loss_rejects_out_of_domain() {
    let o = sketch2ui(&["loss", "--x", "1.5", "--z", "+1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stderr(&o).is_empty());
    assert_eq!(sketch2ui(&["loss", "--x", "0.5"]).status.code(), Some(1));
}

#[test]
fn gradcheck_passes() {
    let o = sketch2ui(&["loss", "--gradcheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("status=ok"), "{}", stdout(&o));
}

#[test]
fn rules_file_overrides_priority() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("rules.json");
    let order = r#"{"priority": ["label", "selectbox", "textbox", "checkbox", "radio", "button", "image", "heading", "link", "paragraph"]}"#;
    fs::write(&rules, order).unwrap();
    let o = run_pipeline(
        "resolve",
        &fixtures().join("checkbox_label.csv"),
        dir.path(),
        &["--rules", rules.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("class=checkbox"), "{}", stdout(&o));
    fs::write(&rules, "{\"bogus\": 1}").unwrap();
    let o = run_pipeline("resolve", &fixtures().join("checkbox_label.csv"), dir.path(), &["--rules", rules.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
