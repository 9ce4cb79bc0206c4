use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use nervepool::io::parse_complex;
use tempfile::TempDir;

const FIG1: &str = "v1,v2,v3\nv0,v1\nv2,v3\nv3,v4\nv1,v3\nv0,v4\n";
const TWO_WAY: &str = "v0,U1\nv4,U1\nv1,U2\nv2,U2\nv3,U2\n";

fn nervepool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nervepool")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn betti_of_the_example_complex() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.txt", FIG1);
    let out = nervepool(&["betti", "--complex", &k]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 1 0\n");
}

#[test]
fn pool_and_nerve_agree_on_labels() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.txt", FIG1);
    let s = write(&dir, "s.txt", TWO_WAY);
    let nerve = nervepool(&["nerve", "--complex", &k, "--partition", &s]);
    assert_eq!(stdout(&nerve), "U1,U2\n");
    let pooled = nervepool(&["pool", "--complex", &k, "--partition", &s]);
    assert_eq!(pooled.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&pooled.stdout).unwrap();
    assert_eq!(json["labels"], serde_json::json!([[["U1"], ["U2"]], [["U1", "U2"]]]));
    assert_eq!(json["betti"]["input"], serde_json::json!([1, 1, 0]));
    assert_eq!(json["betti"]["output"], serde_json::json!([1, 0]));
    let entries = json["boundaries"][0]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert!(json.get("upper_adjacency_normalized").is_none());
}

#[test]
fn singleton_partition_reproduces_the_input() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.txt", FIG1);
    let singles: String = ["v0", "v1", "v2", "v3", "v4"].iter().map(|v| format!("{v},{v}\n")).collect();
    let s = write(&dir, "s.txt", &singles);
    let out = nervepool(&["pool", "--complex", &k, "--partition", &s, "--normalize-adjacency"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts: Vec<usize> = json["labels"].as_array().unwrap().iter().map(|l| l.as_array().unwrap().len()).collect();
    assert_eq!(counts, vec![5, 6, 1]);
    assert!(json.get("upper_adjacency_normalized").is_some());
    let nerve = nervepool(&["nerve", "--complex", &k, "--partition", &s]);
    assert_eq!(parse_complex(&stdout(&nerve)).unwrap(), parse_complex(FIG1).unwrap());
}

#[test]
fn features_are_pooled() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.txt", FIG1);
    let s = write(&dir, "s.txt", TWO_WAY);
    let x = write(&dir, "x0.csv", "simplex,f\nv0,1\nv1,2\nv2,3\nv3,4\nv4,5\n");
    let out = nervepool(&["pool", "--complex", &k, "--partition", &s, "--features", &x]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // hard rows keep weight one, so each cluster sums its members
    assert_eq!(json["features"][0]["rows"], serde_json::json!([[6.0], [9.0]]));
}

#[test]
fn parse_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "a,b\nc,c\n");
    let out = nervepool(&["betti", "--complex", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let k = write(&dir, "k.txt", FIG1);
    let partial = write(&dir, "s.txt", "v0,U1\nv4,U1\nv1,U2\nv2,U2\n");
    let out = nervepool(&["pool", "--complex", &k, "--partition", &partial]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("v3"));

    assert_eq!(nervepool(&["betti", "--complex", "/nonexistent/k.txt"]).status.code(), Some(1));
    assert_eq!(nervepool(&["betti", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(nervepool(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let ok = nervepool(&["verify", "--suite", "all", "--instances", "10", "--seed", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("permutation: 10/10 passed"));
    // soft assignments break the adjacency agreement on most instances
    let soft = nervepool(&["verify", "--suite", "soft", "--instances", "20", "--seed", "3"]);
    assert_eq!(soft.status.code(), Some(2));
    assert!(stdout(&soft).contains("FAIL"));
}

#[test]
fn gen_then_dot() {
    let dir = TempDir::new().unwrap();
    let out = write(&dir, "g.txt", "");
    let gen =
        nervepool(&["gen", "--vertices", "8", "--max-dim", "2", "--density", "0.5", "--seed", "1", "--out", &out]);
    assert_eq!(gen.status.code(), Some(0));
    let k = parse_complex(&fs::read_to_string(&out).unwrap()).unwrap();
    let dot = nervepool(&["dot", "--complex", &out]);
    let text = stdout(&dot);
    assert!(text.starts_with("graph complex {"));
    assert_eq!(text.matches(" -- ").count(), k.count(1));

    let kf = write(&dir, "k.txt", FIG1);
    let s = write(&dir, "s.txt", TWO_WAY);
    let pooled = stdout(&nervepool(&["dot", "--complex", &kf, "--partition", &s, "--pooled"]));
    assert_eq!(pooled.matches(" -- ").count(), 1);
    let coloured = stdout(&nervepool(&["dot", "--complex", &kf, "--partition", &s]));
    assert_eq!(coloured.matches("fillcolor=").count(), 5);
}
