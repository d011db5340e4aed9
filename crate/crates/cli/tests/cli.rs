use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const K5: &str = r#"{"n":5,"edges":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#;
const C6: &str = r#"{"n":6,"edges":[[0,1],[0,5],[1,2],[2,3],[3,4],[4,5]]}"#;

fn outerk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_outerk")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn stderr_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn analyze_k5() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "k5.json", K5);
    let r = stdout_json(&outerk(&["analyze", &f]));
    assert_eq!(r["lcr_of_drawing"], 2);
    assert_eq!(r["td_width"], 4);
    assert_eq!(r["bounds"]["tw_outer_2_planar"], 4);
    assert_eq!(r["bounds"]["cop"], 3.25);
}

#[test]
fn analyze_c6() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c6.json", C6);
    let r = stdout_json(&outerk(&["analyze", &f]));
    assert_eq!(r["td_width"], 2);
    assert_eq!(r["separation_order"], 2);
    let pretty = outerk(&["analyze", "--pretty", &f]);
    assert!(String::from_utf8(pretty.stdout).unwrap().contains("tree decomposition width 2"));
}

#[test]
fn malformed_input_exits_1_without_output() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("bad.json", r#"{"n":5,"edges":[[0,1]"#),
        ("dup.json", r#"{"n":4,"edges":[[0,1],[1,0]]}"#),
        ("loop.json", r#"{"n":4,"edges":[[2,2]]}"#),
    ] {
        let f = write(dir.path(), name, body);
        let o = outerk(&["analyze", &f]);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert!(o.stdout.is_empty());
        assert!(["parse", "invalid-input"].contains(&stderr_kind(&o).as_str()));
    }
    assert_eq!(outerk(&["analyze", "/nonexistent/x.json"]).status.code(), Some(1));
}

#[test]
fn bound_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "k5.json", K5);
    let o = outerk(&["analyze", "--k", "1", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_kind(&o), "bound-violation");
}

#[test]
fn generate_commands() {
    let y = stdout_json(&outerk(&["generate", "prism", "6", "2"]));
    assert_eq!(y["n"], 12);
    assert_eq!(y["edges"].as_array().unwrap().len(), 18);
    let a = outerk(&["generate", "random", "8", "2", "1"]);
    let b = outerk(&["generate", "random", "8", "2", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let o = outerk(&["generate", "prism", "5", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn generated_drawings_round_trip_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let o = outerk(&["generate", "random", "30", "3", "7", "--min"]);
    let f = write(dir.path(), "g.json", std::str::from_utf8(&o.stdout).unwrap());
    let r = stdout_json(&outerk(&["analyze", "--min-k", "3", &f]));
    assert!(r["min_k"]["td_width"].as_u64().unwrap() <= 10);
}

#[test]
fn oracle_commands() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.json", K5);
    let c6 = write(dir.path(), "c6.json", C6);
    assert_eq!(stdout_json(&outerk(&["oracle", "tw", &k5]))["value"], 4);
    assert_eq!(stdout_json(&outerk(&["oracle", "lcr", &c6]))["value"], 0);
    let y = outerk(&["generate", "prism", "6", "2"]);
    let y62 = write(dir.path(), "y62.json", std::str::from_utf8(&y.stdout).unwrap());
    let r = stdout_json(&outerk(&["oracle", "tw", &y62]));
    assert_eq!(r["value"], 4);
    assert_eq!(r["witness"]["kind"], "elimination-order");
    let big = outerk(&["generate", "prism", "8", "2"]);
    let big = write(dir.path(), "y82.json", std::str::from_utf8(&big.stdout).unwrap());
    let o = outerk(&["oracle", "sep", &big]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_kind(&o), "oracle-cap");
}

#[test]
fn render_svg_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = write(dir.path(), "c6.json", C6);
    let k5 = write(dir.path(), "k5.json", K5);
    let out = dir.path().join("c6.svg");
    assert!(outerk(&["render", &c6, "-o", out.to_str().unwrap()]).status.success());
    let svg = fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("class=\"vertex\"").count(), 6);
    assert_eq!(svg.matches("class=\"edge\"").count(), 6);

    let t = outerk(&["triangulate", &k5, "--method", "o2p"]);
    let tf = write(dir.path(), "t.json", std::str::from_utf8(&t.stdout).unwrap());
    let out = dir.path().join("k5.svg");
    assert!(outerk(&["render", &k5, "-o", out.to_str().unwrap(), "--triangulation", &tf]).status.success());
    let first = fs::read(&out).unwrap();
    let svg = String::from_utf8(first.clone()).unwrap();
    assert_eq!(svg.matches("class=\"edge\"").count(), 10);
    assert_eq!(svg.matches("class=\"link\"").count(), 2);
    assert!(outerk(&["render", &k5, "-o", out.to_str().unwrap(), "--triangulation", &tf]).status.success());
    assert_eq!(fs::read(&out).unwrap(), first);

    let dot = dir.path().join("k5.dot");
    assert!(outerk(&["render", &k5, "-o", dot.to_str().unwrap()]).status.success());
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph drawing {"));
    let o = outerk(&["render", &k5, "-o", "/nonexistent/dir/x.svg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn decompose_and_separate() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.json", K5);
    let td = stdout_json(&outerk(&["decompose", &k5, "--method", "o2p"]));
    assert_eq!(td["width"], 4);
    let bags = td["bags"].as_array().unwrap().len();
    assert_eq!(td["tree"].as_array().unwrap().len(), bags - 1);
    let dot = outerk(&["decompose", &k5, "--method", "o2p", "--dot"]);
    let dot = String::from_utf8(dot.stdout).unwrap();
    assert_eq!(dot.matches("label=").count(), bags);
    let s = stdout_json(&outerk(&["separate", &k5]));
    assert!(s["order"].as_u64().unwrap() <= 4);
    assert!(s["A"].is_array() && s["B"].is_array());
}

#[test]
fn batch_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", K5);
    write(dir.path(), "b.json", C6);
    for seed in 0..6 {
        let o = outerk(&["generate", "random", "25", "3", &seed.to_string()]);
        write(dir.path(), &format!("r{seed}.json"), std::str::from_utf8(&o.stdout).unwrap());
    }
    let d = dir.path().to_str().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_outerk"))
            .args(["analyze", "--batch", d])
            .env("OUTERK_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 8);
    assert_eq!(v[0]["file"], "a.json");
    assert_eq!(v[0]["report"]["td_width"], 4);
}
