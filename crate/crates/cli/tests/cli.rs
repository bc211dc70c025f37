use std::io::Write;
use std::process::{Command, Output, Stdio};

use pqdist::graph::Graph;
use serde_json::Value;

fn pqdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pqdist"))
        .arg("--quiet")
        .args(args)
        .env_remove("PQDIST_CHECKPOINT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn classify_two_one() {
    let r = json(&pqdist(&["classify", "--p", "2", "--q", "1"]));
    assert_eq!(r["schema"], 1);
    assert_eq!(r["max_order"], 5);
    assert_eq!(r["count"], 8);
    assert_eq!(r["distinct_graphs"], 8);
}

#[test]
fn classify_one_one_is_infinite() {
    let r = json(&pqdist(&["classify", "--p", "1", "--q", "1"]));
    assert_eq!(r["cell"], "3_∞");
    assert_eq!(r["infinite"], true);
    assert!(!r["families"].as_array().unwrap().is_empty());
}

#[test]
fn classify_graph6_output() {
    let o = pqdist(&["classify", "--p", "3", "--q", "1", "--format", "graph6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn spherical_four_one() {
    let r = json(&pqdist(&["spherical", "--p", "4", "--q", "1"]));
    assert_eq!(r["cell"], "10_1");
    assert_eq!(r["diagnostics"]["excluded"].as_array().unwrap().len(), 1);
}

#[test]
fn check_graph_heptagon() {
    let g6 = Graph::cycle(7).to_graph6();
    let o = pqdist(&[
        "check-graph",
        &g6,
        "--p",
        "2",
        "--q",
        "2",
        "--format",
        "json",
    ]);
    let r = json(&o);
    let cands: Vec<&Value> = r["branches"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|b| b["candidates"].as_array().unwrap())
        .collect();
    assert!(cands.iter().all(|c| c["factor"] == "x^3 + x^2 - 2*x - 1"));
    assert!(cands
        .iter()
        .any(|c| c["representation_type"] == 2 && c["spherical"] == true && c["proper"] == true));
    let text = stdout(&pqdist(&["check-graph", &g6, "--p", "2", "--q", "2"]));
    assert!(text.contains("type 2"));
}

#[test]
fn check_graph_complete_is_degenerate() {
    let o = pqdist(&[
        "check-graph",
        &Graph::complete(5).to_graph6(),
        "--p",
        "2",
        "--q",
        "1",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("degenerate: single relation"));
}

#[test]
fn malformed_graph6_exits_four() {
    let o = pqdist(&["check-graph", "~~~~", "--p", "2", "--q", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn tier_refusal_exits_two() {
    assert_eq!(
        pqdist(&["classify", "--p", "6", "--q", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pqdist(&["classify", "--p", "6", "--q", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn swapped_cell_is_rejected() {
    assert_eq!(
        pqdist(&["classify", "--p", "1", "--q", "2"]).status.code(),
        Some(4)
    );
}

#[test]
fn generate_seven() {
    let o = pqdist(&["generate", "--n", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1044);
}

#[test]
fn construct_family_and_twentytwo() {
    let o = pqdist(&["construct", "family-pq1", "--n", "7"]);
    let r = json(&o);
    assert_eq!(r["size"], 35);
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
    let r = json(&pqdist(&["construct", "twentytwo"]));
    assert_eq!(r["size"], 22);
    let csv = stdout(&pqdist(&["construct", "twentytwo", "--format", "csv"]));
    assert!(csv.lines().filter(|l| !l.starts_with('#')).count() >= 22);
}

#[test]
fn construct_realize_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pqdist"))
        .args(["--quiet", "construct", "realize", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"[["0","1","1","1"],["1","0","1","1"],["1","1","0","1"],["1","1","1","0"]]"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    let r = json(&o);
    assert_eq!(r["size"], 4);
    assert_eq!(r["signature"]["positives"], 3);
}

#[test]
fn checkpoint_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pqdist"))
        .args(["--quiet", "classify", "--p", "3", "--q", "0"])
        .env("PQDIST_CHECKPOINT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("cell_p3_q0").join("cell.json").exists());
    let list = Command::new(env!("CARGO_BIN_EXE_pqdist"))
        .args(["checkpoint", "list"])
        .env("PQDIST_CHECKPOINT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(stdout(&list).contains("(3, 0)"));
    let verify = pqdist(&[
        "checkpoint",
        "verify",
        "--dir",
        dir.path().to_str().unwrap(),
        "--p",
        "3",
        "--q",
        "0",
    ]);
    assert!(verify.status.success());
    let resumed = Command::new(env!("CARGO_BIN_EXE_pqdist"))
        .args(["--quiet", "classify", "--p", "3", "--q", "0", "--resume"])
        .env("PQDIST_CHECKPOINT_DIR", dir.path())
        .output()
        .unwrap();
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("run");
        v
    };
    assert_eq!(strip(&o), strip(&resumed));
    let clear = pqdist(&[
        "checkpoint",
        "clear",
        "--dir",
        dir.path().to_str().unwrap(),
        "--p",
        "3",
        "--q",
        "0",
    ]);
    assert!(clear.status.success());
    assert!(!dir.path().join("cell_p3_q0").exists());
}

#[test]
fn spherical_from_missing_checkpoints_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = pqdist(&[
        "spherical",
        "--p",
        "2",
        "--q",
        "1",
        "--checkpoint-dir",
        dir.path().to_str().unwrap(),
        "--from-checkpoints",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("classify"));
}

#[test]
fn verify_tables_small_reports_each_cell() {
    let o = pqdist(&["verify-tables", "--tier", "small", "--table", "1"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.contains("PASS")).count(), 11);
}
