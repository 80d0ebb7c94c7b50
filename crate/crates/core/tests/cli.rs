use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_syswidth"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("syswidth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> (i32, Vec<Value>) {
    let out = bin().args(args).output().unwrap();
    let lines = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (out.status.code().unwrap(), lines)
}

fn gen(args: &[&str], name: &str) -> PathBuf {
    let path = scratch(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let status = bin().args(&full).status().unwrap();
    assert!(status.success());
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn exact_content_of_generated_interval() {
    let space = gen(&["interval", "--length", "1", "--h", "0.1"], "interval.json");
    let (code, lines) = run(&["hc", "--space", p(&space), "--dim", "1", "--mode", "exact"]);
    assert_eq!(code, 0);
    let rep = &lines[0];
    assert_eq!(rep["outcome"], "success");
    assert_eq!(rep["certificate"]["side"], "exact");
    assert!((rep["certificate"]["value"].as_f64().unwrap() - 0.55).abs() < 1e-12);
    assert_eq!(rep["input_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn reports_append_to_output_file() {
    let space = gen(&["circle", "--length", "1", "--h", "0.1"], "circle.json");
    let out = scratch("reports.jsonl");
    let _ = std::fs::remove_file(&out);
    for cmd in ["systole", "verify"] {
        let mut args = vec![cmd, "--space", p(&space), "-o", p(&out)];
        if cmd == "verify" {
            args.extend_from_slice(&["--dim", "1"]);
        }
        assert!(bin().args(&args).status().unwrap().success());
    }
    let text = std::fs::read_to_string(&out).unwrap();
    let reports: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["command"], "systole");
    assert!((reports[0]["certificate"]["length"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(reports[1]["certificate"]["essential"], true);
}

#[test]
fn malformed_document_exits_with_input_error() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let (code, lines) = run(&["hc", "--space", p(&bad), "--dim", "1"]);
    assert_eq!(code, 2);
    assert_eq!(lines[0]["outcome"], "error");
}

#[test]
fn violated_hypothesis_exits_with_one() {
    let space = gen(&["interval", "--length", "1", "--h", "0.1"], "interval-hyp.json");
    let (code, lines) = run(&["width", "--space", p(&space), "--dim", "1", "--r", "0.3"]);
    assert_eq!(code, 1);
    assert_eq!(lines[0]["outcome"], "hypothesis-violation");
}

#[test]
fn non_integer_counts_are_rejected() {
    let space = gen(&["interval", "--length", "1", "--h", "0.1"], "interval-count.json");
    let (code, _) = run(&["separate", "--space", p(&space), "--dim", "1.5", "--r", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn tree_threshold_on_star() {
    let space = gen(&["star", "--edges", "3", "--length", "1", "--h", "0.1"], "star.json");
    let (code, lines) = run(&["tree", "--space", p(&space), "--r", "1.6"]);
    assert_eq!(code, 0);
    let th = &lines[0]["certificate"]["threshold"];
    assert_eq!(th["hypothesis_holds"], true);
    assert_eq!(th["conclusion_holds"], true);
}

#[test]
fn coarea_and_separator_run() {
    let space = gen(&["random-points", "--n", "15", "--h", "0.1", "--seed", "3"], "points.json");
    let (code, lines) = run(&["coarea", "--space", p(&space), "--dim", "2", "--center", "0", "--r1", "0.1", "--r2", "0.7"]);
    assert_eq!(code, 0);
    let c = &lines[0]["certificate"];
    assert!(c["certified_bound"].as_f64().unwrap() >= c["weight"].as_f64().unwrap());
    let (code, lines) = run(&["separate", "--space", p(&space), "--dim", "1", "--r", "40"]);
    assert_eq!(code, 0, "{:?}", lines);
}

#[test]
fn generation_is_deterministic() {
    let a = gen(&["tree", "--edges", "6", "--seed", "9", "--h", "0.2"], "tree-a.json");
    let b = gen(&["tree", "--edges", "6", "--seed", "9", "--h", "0.2"], "tree-b.json");
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}
