use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn tlkit(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tlkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_graph(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn param(report: &Value, name: &str) -> Value {
    report["params"].as_array().unwrap().iter().find(|e| e["name"] == name).unwrap().clone()
}

const DIAMOND: &str = "0 1\n0 2\n0 3\n1 3\n2 3\n";

#[test]
fn generate_then_compute() {
    let g = tlkit(&["generate", "cycle", "--n", "12"], "");
    assert_eq!(g.status.code(), Some(0));
    let r = json(&tlkit(&["compute", "-", "--json"], &stdout(&g)));
    assert_eq!(r["schema"], 1);
    assert_eq!(r["graph"]["n"], 12);
    let tl = param(&r, "tl");
    assert_eq!((tl["value"].clone(), tl["status"].clone()), (Value::from(4), Value::from("exact")));
    assert_eq!(param(&r, "cbc")["value"], 4);
}

#[test]
fn output_is_deterministic() {
    let g = stdout(&tlkit(&["generate", "random-connected", "--n", "9", "--m", "14", "--seed", "5"], ""));
    let a = tlkit(&["compute", "-", "--json"], &g);
    let b = tlkit(&["compute", "-", "--json"], &g);
    assert_eq!(a.stdout, b.stdout);
    let other = stdout(&tlkit(&["generate", "random-connected", "--n", "9", "--m", "14", "--seed", "6"], ""));
    assert_ne!(g, other);
}

#[test]
fn params_filter_and_source() {
    let f = write_graph(&stdout(&tlkit(&["generate", "cycle", "--n", "8"], "")));
    let path = f.path().to_str().unwrap();
    let r = json(&tlkit(&["compute", path, "--params", "delta,cbc", "--source", "3", "--json"], ""));
    let names: Vec<&str> = r["params"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["delta", "cbc"]);
    assert_eq!(r["sources"].as_array().unwrap().len(), 1);
    let bad = tlkit(&["compute", path, "--params", "width"], "");
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&tlkit(&["compute", path], ""));
    assert!(text.contains("ledger:"));
}

#[test]
fn separator_radius_within_tree_breadth() {
    let f = write_graph(&stdout(&tlkit(&["generate", "cycle", "--n", "6"], "")));
    let path = f.path().to_str().unwrap();
    let c = json(&tlkit(&["separator", path, "--set", "0,2,4", "--method", "exhaustive", "--json"], ""));
    let o = json(&tlkit(&["oracle", path, "--json"], ""));
    assert!(c["radius"].as_u64().unwrap() <= o["tb"].as_u64().unwrap());
    assert_eq!(c["balanced"], true);
    let l = json(&tlkit(&["separator", path, "--set", "0,2,4", "--method", "layering", "--source", "0", "--json"], ""));
    assert_eq!(l["balanced"], true);
}

#[test]
fn decompose_writes_valid_json() {
    let f = write_graph(&stdout(&tlkit(&["generate", "grid", "--p", "3", "--q", "3"], "")));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("td.json");
    let o = tlkit(&["decompose", f.path().to_str().unwrap(), "--source", "0", "--out", out.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("length "));
    let td: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let bags = td["bags"].as_array().unwrap();
    assert_eq!(td["tree"].as_array().unwrap().len() + 1, bags.len());
}

#[test]
fn canonical_fatminor_and_cycles() {
    let f = write_graph(&stdout(&tlkit(&["generate", "cycle", "--n", "20"], "")));
    let path = f.path().to_str().unwrap();
    let c = json(&tlkit(&["canonical", path, "--source", "0", "--json"], ""));
    assert_eq!(c["edges"].as_array().unwrap().len(), 19);
    assert!(c["max_over"].as_u64().unwrap() <= 2);
    assert!(stdout(&tlkit(&["canonical", path, "--source", "0"], "")).starts_with("# root 0\n"));

    let w = json(&tlkit(&["fatminor", path, "--source", "0", "--k", "2", "--json"], ""));
    assert_eq!(w["verified"], true);
    assert_eq!(w["h3"], serde_json::json!([0, 1, 19]));
    let unmet = tlkit(&["fatminor", path, "--source", "0", "--k", "3"], "");
    assert_eq!(unmet.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unmet.stderr).contains("precondition"));

    let cy = json(&tlkit(&["cycles", path, "--json"], ""));
    assert_eq!((cy["cycles"].clone(), cy["cbc"].clone()), (Value::from(1), Value::from(6)));
}

#[test]
fn verify_exit_codes() {
    let c6 = write_graph(&stdout(&tlkit(&["generate", "cycle", "--n", "6"], "")));
    let ok = tlkit(&["verify", c6.path().to_str().unwrap()], "");
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("holds"));

    // The per-source form of the mf chain fails on the diamond.
    let bad = tlkit(&["verify", "-", "--json"], DIAMOND);
    assert_eq!(bad.status.code(), Some(2));
    let rows: Value = serde_json::from_slice(&bad.stdout).unwrap();
    let violated: Vec<&str> = rows
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["verdict"] == "violated")
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(violated, ["mf.bnc.2"]);
    assert_eq!(tlkit(&["verify", "-", "--no-main"], DIAMOND).status.code(), Some(0));

    let corpus = tlkit(&["verify", "--corpus", "cycles:min=3,max=12;bow;tree:count=5,maxn=12,seed=1"], "");
    assert_eq!(corpus.status.code(), Some(0), "{}", stdout(&corpus));
    assert!(stdout(&corpus).starts_with("16 graphs, 0 errors"));
    let corpus = tlkit(&["verify", "--corpus", "random:count=40,maxn=8,seed=7"], "");
    assert_eq!(corpus.status.code(), Some(2));
    assert!(stdout(&corpus).contains("first violation: mf.bnc.2"));
}

#[test]
fn input_errors_exit_one() {
    for (args, stdin, needle) in [
        (vec!["compute", "-"], "0 0\n", "line 1"),
        (vec!["compute", "-"], "0 1\n1 0\n", "line 2"),
        (vec!["compute", "-"], "0 1\n2 3\n", "connected"),
        (vec!["compute", "-"], "0 x\n", "line 1"),
        (vec!["compute", "/nonexistent/graph.el"], "", "graph.el"),
        (vec!["canonical", "-", "--source", "9"], "0 1\n", "vertex 9"),
        (vec!["generate", "cycle", "--n", "2"], "", "cycle"),
        (vec!["generate", "wheel", "--n", "5"], "", "wheel"),
        (vec!["verify", "--corpus", "random:count=3"], "", "maxn"),
        (vec!["compute", "-", "--bogus"], "0 1\n", "--bogus"),
        (vec!["frobnicate"], "", "frobnicate"),
    ] {
        let o = tlkit(&args, stdin);
        let err = String::from_utf8_lossy(&o.stderr).to_string();
        assert_eq!(o.status.code(), Some(1), "{args:?}: {err}");
        assert!(err.contains(needle), "{args:?}: {err}");
    }
    let help = tlkit(&["--help"], "");
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("verify"));
}

#[test]
fn threads_flag_does_not_change_output() {
    let g = stdout(&tlkit(&["generate", "random-chordal", "--n", "12", "--seed", "3"], ""));
    let one = tlkit(&["--threads", "1", "compute", "-", "--json"], &g);
    let many = tlkit(&["compute", "-", "--json", "--threads", "4"], &g);
    assert_eq!(one.stdout, many.stdout);
}
