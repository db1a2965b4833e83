use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spherical")).args(args).output().expect("binary runs")
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check-triple", "(so(8), so(7), spin)"]).status.code(), Some(0));
    assert_eq!(run(&["check-triple", "(sl(4), sp(4), w1 + w1)"]).status.code(), Some(1));
    assert_eq!(run(&["check-triple", "(sl(4), sp(4), w1 +"]).status.code(), Some(2));
    assert_eq!(run(&["check-triple", "(sl(4), sp(4), w7)"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn json_is_reproducible_and_carries_the_checksum() {
    let args = ["--json", "--seed", "7", "check-triple", "(sp(6)+sl(3), sp(4)+sl(2)+sl(3), w1' w1'')"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["databaseChecksum"].as_str().map(str::len), Some(64));
}

#[test]
fn module_lookup() {
    let out = run(&["check-module", "sp(4)+sl(2)", "w1 w1'"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
