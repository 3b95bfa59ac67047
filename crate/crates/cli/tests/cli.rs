use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hanoi-kernel"))
        .args(args)
        .env_remove("LOGLEVEL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_single_lemma() {
    let out = run(&["verify", "stab12", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["command"], "verify");
    assert_eq!(v["pass"], true);
    assert!(stderr(&out).contains("overall: PASS"));
}

#[test]
fn verify_list_names_every_lemma() {
    let out = run(&["verify", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &stderr(&out);
    for id in [
        "transrec",
        "branching",
        "rist",
        "stab12",
        "stabquot",
        "ristquot",
        "elab",
        "index",
        "selfsim",
        "transitive",
        "presentation",
    ] {
        assert!(text.contains(id), "missing {id}");
    }
}

#[test]
fn kernel_report_reaches_the_klein_four_group() {
    let out = run(&["kernel-report", "--n-max", "2", "--depth", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let text = v.to_string();
    assert!(text.contains("Klein four-group"));
}

#[test]
fn game_act_worked_example() {
    let out = run(&["game", "act", "--state", "2,1,3,2,2,1", "--move", "b"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"][0]["computed"], "2,3,3,2,2,1");
}

#[test]
fn game_solve_length() {
    let out = run(&["game", "solve", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"][0]["pass"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "nosuchlemma"]).status.code(), Some(2));
    assert_eq!(
        run(&["game", "act", "--state", "1,4", "--move", "a"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn resource_caps_exit_three() {
    assert_eq!(
        run(&["verify", "transitive", "--depth", "9"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["game", "solve", "--n", "40"]).status.code(), Some(3));
    assert_eq!(run(&["relators", "--depth", "11"]).status.code(), Some(3));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("hanoi-kernel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "--out",
        path.to_str().unwrap(),
        "verify",
        "index",
        "--depth",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_byte_stable() {
    let args = ["qtable", "--n-max", "2", "--depth", "3"];
    let (first, second) = (run(&args), run(&args));
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn export_portrait_formats() {
    let out = run(&[
        "export", "portrait", "ab", "--depth", "2", "--format", "dot",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("digraph"));
    let out = run(&["export", "portrait", "ab", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    json(&out);
}
