use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const XOR3: &str = "universe 2
op m arity 3
0 0 0 : 0
0 0 1 : 1
0 1 0 : 1
0 1 1 : 0
1 0 0 : 1
1 0 1 : 0
1 1 0 : 0
1 1 1 : 1
";

const AND: &str = "universe 2\nop and arity 2\n0 0 : 0\n0 1 : 0\n1 0 : 0\n1 1 : 1\n";
const MEDIAN: &str = "universe 2
op med arity 3
0 0 0 : 0
0 0 1 : 0
0 1 0 : 0
0 1 1 : 1
1 0 0 : 0
1 0 1 : 1
1 1 0 : 1
1 1 1 : 1
";

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("multiclone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiclone")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn classify_xor_minority() {
    let f = scratch("xor.op", XOR3);
    let out = run(&["classify", p(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["type"], "T5_boolean_group");
    assert_eq!(r["group"]["add"], serde_json::json!([0, 1, 1, 0]));
    assert!(r["provenance"].as_array().unwrap().len() > 3);
}

#[test]
fn classify_and_and_empty() {
    let f = scratch("and.op", AND);
    assert_eq!(json(&run(&["classify", p(&f)]))["type"], "T2_binary_idempotent");
    let e = scratch("empty.op", "universe 2\nop e arity 1\n0 : -\n1 : -\n");
    assert_eq!(json(&run(&["classify", p(&e)]))["type"], "T1_unary");
}

#[test]
fn classify_reports_are_deterministic_and_reusable() {
    let f = scratch("xor2.op", XOR3);
    let a = run(&["classify", p(&f)]);
    let b = run(&["classify", p(&f)]);
    assert_eq!(a.stdout, b.stdout);
    let report = scratch("report.json", std::str::from_utf8(&a.stdout).unwrap());
    let again = run(&["classify", p(&report)]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again)["type"], "T5_boolean_group");
}

#[test]
fn classify_limit_is_inconclusive() {
    let f = scratch("xor3.op", XOR3);
    let out = run(&["classify", p(&f), "--limit", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["type"], "inconclusive");
}

#[test]
fn close_counts_and_flags() {
    let fg = run(&["fg", "--universe", "2"]);
    assert_eq!(fg.status.code(), Some(0));
    let gens = scratch("fg2.op", std::str::from_utf8(&fg.stdout).unwrap());
    let out = run(&["close", p(&gens), "--arity", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("op ")).count(), 8);
    let limited = run(&["close", p(&gens), "--arity", "2", "--limit", "2"]);
    assert_eq!(limited.status.code(), Some(2));
    assert!(String::from_utf8(limited.stderr).unwrap().contains("saturated false"));
    let none = scratch("none.op", "universe 3\n");
    let out = run(&["close", p(&none), "--arity", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("op ")).count(), 3);
}

#[test]
fn close_output_is_an_opfile() {
    let f = scratch("and2.op", AND);
    let out = scratch("frag.op", "");
    let status = run(&["close", p(&f), "--arity", "2", "--out", p(&out)]);
    assert_eq!(status.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let g = multiclone::opfile::parse_opfile(&text).unwrap();
    assert_eq!(g.len(), 3);
}

#[test]
fn props_examples() {
    let f = scratch("props.op", &format!("{XOR3}{}", MEDIAN.trim_start_matches("universe 2\n")));
    let r = json(&run(&["props", p(&f)]));
    let ops = r["operations"].as_array().unwrap();
    assert_eq!(ops[0]["minority"], true);
    assert_eq!(ops[0]["maltsev"], true);
    assert_eq!(ops[0]["chi"], "221");
    assert_eq!(ops[1]["majority"], true);
    assert_eq!(ops[1]["chi"], "112");
    let e = scratch("e31.op", "universe 2\nop e arity 3\n0 0 0 : 0\n0 0 1 : 0\n0 1 0 : 0\n0 1 1 : 0\n1 0 0 : 1\n1 0 1 : 1\n1 1 0 : 1\n1 1 1 : 1\n");
    let r = json(&run(&["props", p(&e)]));
    assert_eq!(r["operations"][0]["projection"], 1);
    assert_eq!(r["operations"][0]["semiprojection"], 1);
}

#[test]
fn equivalence_examples() {
    let fg = run(&["fg", "--universe", "2"]);
    let gens = scratch("fg2t.op", std::str::from_utf8(&fg.stdout).unwrap());
    let r = json(&run(&["theorem2", p(&gens), "--cap", "3"]));
    assert_eq!(r["verdict"], "i_and_ii");
    assert_eq!(r["matched_group"]["add"], serde_json::json!([0, 1, 1, 0]));
    let none = scratch("proj.op", "universe 2\n");
    assert_eq!(json(&run(&["theorem2", p(&none)]))["verdict"], "neither");
    let multi = scratch("multi.op", "universe 2\nop h arity 1\n0 : 0,1\n1 : 1\n");
    let out = run(&["theorem2", p(&multi)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("operation required"));
}

#[test]
fn parse_errors_exit_one_with_line() {
    let bad = scratch("bad.op", "universe 2\nop f arity 1\n1 : 0\n0 : 1\n");
    let out = run(&["classify", p(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
    assert_eq!(run(&["fg", "--universe", "3"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["close", p(&bad)]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
