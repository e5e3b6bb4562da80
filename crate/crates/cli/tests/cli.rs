use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::NamedTempFile;

const LOOP: &str = r#"{"vertices":["v"],"edges":[{"id":"e","src":"v","dst":"v"}]}"#;
const EDGE: &str = r#"{"vertices":["u","v"],"edges":[{"id":"e","src":"u","dst":"v"}]}"#;
// v0 -> v1 -> v2 with a loop at v2.
const TAIL: &str = r#"{"vertices":["a","b","c"],"edges":[
  {"id":"x","src":"a","dst":"b"},{"id":"y","src":"b","dst":"c"},{"id":"z","src":"c","dst":"c"}]}"#;

fn input_file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], file: &NamedTempFile) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaugefree"))
        .args(args)
        .arg(file.path())
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn analyze_single_edge() {
    let f = input_file(EDGE);
    let o = run(&["analyze", "--format", "json"], &f);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let verdicts: Vec<&str> = v["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["analyzer_verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts, ["not free", "free", "not free"]);
    assert_eq!(v["groups"][0]["oracle_status"], "skipped");
    assert_eq!(v["groups"][0]["witness"]["kind"], "not_faithful");
}

#[test]
fn verify_loop_certificate() {
    let f = input_file(LOOP);
    let o = run(
        &[
            "verify",
            "--groups",
            "full",
            "--max-len",
            "4",
            "--format",
            "json",
        ],
        &f,
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let g = &v["groups"][0];
    assert_eq!(g["oracle_status"], "certified");
    assert_eq!(g["agreement"], true);
    let plus = &g["certificate"][0];
    assert_eq!(plus["direction"], "+");
    assert_eq!(plus["terms"][0]["left"], "s(e)");
    assert_eq!(plus["terms"][0]["right"], "s*(e)");
}

#[test]
fn undecided_counts_as_agreement_with_not_free() {
    let f = input_file(EDGE);
    let o = run(&["verify", "--groups", "full,3"], &f);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("group full: not free"), "{text}");
    assert!(text.contains("undecided_at(6); agreement"), "{text}");
}

#[test]
fn disagreement_exits_two() {
    // Free for the full group, but no certificate exists with factors of
    // length 1.
    let f = input_file(TAIL);
    let o = run(&["verify", "--groups", "full", "--max-len", "1"], &f);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("DISAGREEMENT"));
}

#[test]
fn resource_cap_exits_three() {
    let f = input_file(TAIL);
    let o = run(&["verify", "--groups", "full", "--max-products", "5"], &f);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("resource_cap(5)"));
}

#[test]
fn parse_errors_exit_one() {
    let f = input_file(r#"{"vertices":["u"],"edges":[{"id":"e","src":"u","dst":"w"}]}"#);
    let o = run(&["analyze"], &f);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("edges[0].dst: unknown vertex `w`"), "{err}");

    let f = input_file("{\"points\": [\"a\"],\n \"dims\": [[-1]]}");
    let o = run(&["analyze"], &f);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("negative entry"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    let f = input_file(LOOP);
    let o = run(&["analyze", "--groups", "full,1"], &f);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("k >= 2"));

    let o = run(&["analyze", "--format", "yaml"], &f);
    assert_eq!(o.status.code(), Some(1));

    let o = Command::new(env!("CARGO_BIN_EXE_gaugefree"))
        .arg("frobnicate")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gaugefree"))
        .args(["analyze", "--groups", "full,2", "--format", "json", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"points":["v"],"dims":[["inf"]]}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["groups"][0]["free"], false);
    assert_eq!(v["groups"][1]["free"], true);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let f = input_file(TAIL);
    let args = [
        "verify",
        "--groups",
        "full,2,3",
        "--max-len",
        "5",
        "--format",
        "json",
    ];
    let a = run(&args, &f);
    let b = run(&args, &f);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_documents_one_sided_agreement() {
    let o = Command::new(env!("CARGO_BIN_EXE_gaugefree"))
        .args(["verify", "--help"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("undecided oracle therefore counts as AGREEMENT"));
}
