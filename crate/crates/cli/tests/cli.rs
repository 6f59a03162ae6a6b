use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn kcrit(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kcrit"))
        .args(args)
        .env_remove("KCRIT_LIMITS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("exactly one JSON document")
}

const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
const C5: &str = "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n";

fn moser_g6() -> String {
    let out = kcrit(&["gen", "gallai", "-k", "4", "-j", "2", "--format", "graph6"], "");
    assert!(out.status.success());
    stdout(&out)
}

#[test]
fn recognize_spindle_as_json() {
    let out = kcrit(&["recognize", "-k", "4", "--json"], &moser_g6());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["tree"]["kind"], "node");
}

#[test]
fn recognize_rejects_with_exit_one() {
    let out = kcrit(&["recognize", "-k", "4"], C5);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("no"));
}

#[test]
fn decompose_tree_lists_leaves() {
    let out = kcrit(&["decompose", "-k", "4", "--tree"], &moser_g6());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).matches("K4").count(), 2);
}

#[test]
fn malformed_input_names_the_line() {
    let out = kcrit(&["chi"], "4 6\n0 1\n0 2\n0 x\n");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(kcrit(&["frobnicate"], "").status.code(), Some(2));
    assert_eq!(kcrit(&["chi", "--bogus"], K4).status.code(), Some(2));
}

#[test]
fn chi_with_witness() {
    let out = kcrit(&["chi", "--json", "--witness"], C5);
    let v = json(&out);
    assert_eq!(v["chi"], 3);
    assert_eq!(v["witness"].as_object().unwrap().len(), 5);
    assert_eq!(stdout(&kcrit(&["chi"], K4)).trim(), "4");
}

#[test]
fn critical_exit_codes() {
    assert_eq!(kcrit(&["critical", "-k", "4"], K4).status.code(), Some(0));
    assert_eq!(kcrit(&["critical", "-k", "3"], C5).status.code(), Some(0));
    let out = kcrit(&["critical", "-k", "4", "--json", "--witness"], C5);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["obstruction"]["kind"], "colorable");
}

#[test]
fn potential_report() {
    let out = kcrit(&["potential", "-k", "4", "--json"], K4);
    let v = json(&out);
    assert_eq!(v["rho_full"], 4);
    assert_eq!(v["p_k"], 4);
    let out = kcrit(&["potential", "-k", "5", "--set", "0"], K4);
    assert_eq!(stdout(&out).trim(), "18");
}

#[test]
fn bounds_verify_hkt_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h62.el");
    let out = kcrit(&["gen", "hkt", "-k", "6", "-t", "2"], "");
    std::fs::write(&path, out.stdout).unwrap();
    let out = kcrit(&["bounds", "verify", "-k", "6", "--json", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rho_full"], 8);
    assert_eq!(v["is_ore"], false);
    assert_eq!(v["verdicts"]["non_ore_tight"], true);
}

#[test]
fn bounds_table_tsv() {
    let out = kcrit(&["bounds", "table", "-k", "5", "--n-from", "7", "--n-to", "9"], "");
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n\tF\tgallai\texact\tcases");
    assert!(lines[1].starts_with("7\t"));
    assert_eq!(lines.len(), 4);
}

#[test]
fn bounds_recurrence_holds() {
    let out = kcrit(&["bounds", "recurrence", "-k", "4", "--steps", "2", "--json"], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["expected_increment"], 5);
}

#[test]
fn gen_search_finds_hits() {
    let out = kcrit(&["gen", "search", "--k", "5", "--n", "7", "--m", "16", "--json"], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["count"].as_u64().unwrap() >= 1);
    let out = kcrit(&["gen", "search", "--k", "4", "--n", "5"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_gk_and_triangle_split() {
    let out = kcrit(&["gen", "gk", "-k", "6", "--steps", "1", "--json"], "");
    let v = json(&out);
    assert_eq!((v["n"].as_u64(), v["m"].as_u64()), (Some(16), Some(44)));
    let out = kcrit(&["gen", "triangle-split", "-k", "5", "--parts", "2,1,1", "--json"], "");
    assert_eq!(json(&out)["m"], 22);
}

#[test]
fn compose_two_k4() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.el");
    std::fs::write(&a, K4).unwrap();
    let (a, b) = (a.to_str().unwrap(), a.to_str().unwrap());
    let out = kcrit(&["compose", a, b, "--edge", "0,1", "--split", "0", "--to-x", "1", "--json"], "");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["n"].as_u64(), v["m"].as_u64()), (Some(7), Some(11)));
}

#[test]
fn forcing_and_two_cut_tools() {
    let out = kcrit(&["forcing", "-c", "3", "-a", "1", "-b", "2", "--json"], "4 5\n0 1\n0 2\n1 3\n2 3\n1 2\n");
    assert_eq!(json(&out)["relation"], "always-distinct");
    let spindle = moser_g6();
    let out = kcrit(&["clusters", "-k", "4", "--json"], &spindle);
    assert!(json(&out).as_array().is_some());
    let out = kcrit(&["standard-sets", "-k", "4", "--json"], &spindle);
    assert!(!json(&out).as_array().unwrap().is_empty());
}

#[test]
fn threads_do_not_change_output() {
    let a = kcrit(&["critical", "-k", "4", "--json", "--witness", "--threads", "1"], &moser_g6());
    let b = kcrit(&["critical", "-k", "4", "--json", "--witness", "--threads", "3"], &moser_g6());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn limits_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_kcrit"))
        .args(["gen", "search", "--k", "4", "--n", "8"])
        .env("KCRIT_LIMITS", "search=7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("limit"));
}
