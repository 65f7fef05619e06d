//! End-to-end tests of the `elproofs` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_elproofs"))
}

fn tasks_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tasks")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bench_is_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    for csv in [&csv_a, &csv_b] {
        let out = run(&[
            "bench",
            "--tasks",
            tasks_dir().to_str().unwrap(),
            "--out",
            csv.to_str().unwrap(),
            "--deterministic",
            "--jobs",
            "3",
        ]);
        assert!(out.status.success(), "bench failed: {out:?}");
        assert!(stdout(&out).contains("ok=9"), "unexpected summary: {}", stdout(&out));
    }
    let a = fs::read(&csv_a).unwrap();
    let b = fs::read(&csv_b).unwrap();
    assert_eq!(a, b, "CSV differs between reruns");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(
        "task,calculus,mode,status,size,depth,justification,bushiness,cutwidth,avg_step_complexity,runtime_ms\n"
    ));
    assert_eq!(text.lines().count(), 10);
    assert!(text.contains("example,elk,minimal,ok,10,3,6,2.5000,3,"));
    assert!(text.contains("example,textbook,minimal,ok,9,2,6,3.0000,4,"));
    assert!(text.contains("example,envelope,minimal,ok,10,4,6,2.0000,3,"));
}

#[test]
fn unsupported_tasks_become_rows_not_failures() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite");
    let task = suite.join("trans");
    fs::create_dir_all(&task).unwrap();
    for file in ["tbox.elt", "goal.elt"] {
        fs::copy(fixture("trans_chain").join(file), task.join(file)).unwrap();
    }
    let csv = dir.path().join("out.csv");
    let out = run(&[
        "bench",
        "--tasks",
        suite.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--deterministic",
    ]);
    assert!(out.status.success(), "bench failed: {out:?}");
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.contains("trans,textbook,minimal,unsupported,,,,,,,0"), "{text}");
    assert!(text.contains("trans,elk,minimal,ok,"), "{text}");
    assert!(text.contains("trans,envelope,minimal,ok,"), "{text}");
}

#[test]
fn goal_not_entailed_is_a_row_status() {
    let dir = tempfile::tempdir().unwrap();
    let task = dir.path().join("suite/back");
    fs::create_dir_all(&task).unwrap();
    fs::write(task.join("tbox.elt"), "SubClassOf(A B)\n").unwrap();
    fs::write(task.join("goal.elt"), "SubClassOf(B A)\n").unwrap();
    let csv = dir.path().join("out.csv");
    let out = run(&[
        "bench",
        "--tasks",
        dir.path().join("suite").to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--deterministic",
    ]);
    assert!(out.status.success(), "non-entailed goals are not task errors: {out:?}");
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.contains("back,elk,minimal,goal-not-entailed,,,,,,,0"), "{text}");
}

#[test]
fn prove_then_metrics_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("proof.json");
    let tbox = tasks_dir().join("example/tbox.elt");
    for _ in 0..2 {
        let out = run(&[
            "prove",
            "--tbox",
            tbox.to_str().unwrap(),
            "--goal",
            "SubClassOf(A E)",
            "--calculus",
            "textbook",
            "--out",
            proof.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "prove failed: {out:?}");
    }
    let json = fs::read_to_string(&proof).unwrap();
    assert!(json.contains("\"calculus\": \"textbook\""), "{json}");
    assert!(json.contains("\"goal\": \"SubClassOf(A E)\""), "{json}");
    let out = run(&["metrics", "--proof", proof.to_str().unwrap()]);
    assert!(out.status.success(), "metrics failed: {out:?}");
    let text = stdout(&out);
    assert!(text.contains("\"size\": 9"), "{text}");
    assert!(text.contains("\"depth\": 2"), "{text}");
    assert!(text.contains("\"cutwidth\": 4"), "{text}");
    assert!(text.contains("\"decimal\": \"3.0000\""), "{text}");
}

#[test]
fn metrics_accepts_weight_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("proof.json");
    let weights = dir.path().join("weights.json");
    let out = run(&[
        "prove",
        "--tbox",
        tasks_dir().join("unsat/tbox.elt").to_str().unwrap(),
        "--goal",
        "SubClassOf(A owl:Nothing)",
        "--calculus",
        "elk",
        "--out",
        proof.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "prove failed: {out:?}");
    // drop the triviality surcharge: 92 becomes 42 on the bottom step
    fs::write(&weights, "{\"triviality\": 0}\n").unwrap();
    let out = run(&[
        "metrics",
        "--proof",
        proof.to_str().unwrap(),
        "--weights",
        weights.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "metrics failed: {out:?}");
    assert!(stdout(&out).contains("\"decimal\": \"42.0000\""), "{}", stdout(&out));
}

#[test]
fn classify_lists_entailed_pairs() {
    let out = run(&[
        "classify",
        "--tbox",
        tasks_dir().join("example/tbox.elt").to_str().unwrap(),
        "--calculus",
        "elk",
    ]);
    assert!(out.status.success(), "classify failed: {out:?}");
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.contains(&"SubClassOf(A E)"), "{text}");
    assert!(lines.contains(&"SubClassOf(B E)"), "{text}");
    assert!(!lines.contains(&"SubClassOf(E A)"), "{text}");
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted, "output not sorted");
}

#[test]
fn exit_codes_distinguish_usage_and_task_errors() {
    let tbox = tasks_dir().join("example/tbox.elt");
    // goal not entailed → task error (2)
    let out = run(&[
        "prove",
        "--tbox",
        tbox.to_str().unwrap(),
        "--goal",
        "SubClassOf(E A)",
        "--calculus",
        "elk",
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    // missing file → usage/IO error (1)
    let out = run(&[
        "prove",
        "--tbox",
        "/nonexistent.elt",
        "--goal",
        "SubClassOf(A B)",
        "--calculus",
        "elk",
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    // unknown calculus → usage error (1)
    let out = run(&[
        "prove",
        "--tbox",
        tbox.to_str().unwrap(),
        "--goal",
        "SubClassOf(A B)",
        "--calculus",
        "hermit",
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn compare_writes_scatter_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("results.csv");
    let out = run(&[
        "bench",
        "--tasks",
        tasks_dir().to_str().unwrap(),
        "--calculi",
        "textbook,elk",
        "--out",
        csv.to_str().unwrap(),
        "--deterministic",
    ]);
    assert!(out.status.success(), "bench failed: {out:?}");
    let dat = dir.path().join("scatter.dat");
    let svg = dir.path().join("scatter.svg");
    let out = run(&[
        "compare",
        "--results",
        csv.to_str().unwrap(),
        "--metric",
        "size",
        "--scatter",
        dat.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "compare failed: {out:?}");
    assert!(stdout(&out).contains("(textbook, elk) size:"), "{}", stdout(&out));
    let dat_file = dir.path().join("scatter_elk_textbook.dat");
    let svg_file = dir.path().join("scatter_elk_textbook.svg");
    let dat_text = fs::read_to_string(&dat_file).unwrap();
    assert_eq!(dat_text.lines().count(), 4, "{dat_text}"); // header + 3 tasks
    let svg_text = fs::read_to_string(&svg_file).unwrap();
    assert!(svg_text.starts_with("<svg") && svg_text.contains("<circle"), "{svg_text}");
}
