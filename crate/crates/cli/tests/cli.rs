use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parkforest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn map_and_unmap_small_examples() {
    assert_eq!(ok(&["map", "0,0"]), "2,1\n");
    assert_eq!(ok(&["map", "2,0"]), "1,1\n");
    assert_eq!(ok(&["map", "0,1"]), "1,2\n");
    assert_eq!(ok(&["unmap", "1,1"]), "2,0\n");
    assert_eq!(ok(&["unmap", "1,2"]), "0,1\n");
}

#[test]
fn map_accepts_structured_record() {
    assert_eq!(ok(&["map", r#"{"n":2,"parent":[0,0]}"#]), "2,1\n");
    assert_eq!(ok(&["unmap", "[1,1]"]), "2,0\n");
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_parkforest"))
        .args(["map", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"0,0\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(stdout(&out), "2,1\n");
}

#[test]
fn unmap_trace_shows_space_table() {
    let out = ok(&["unmap", "--trace", "10,2,6,5,7,1,13,10,4,1,14,9,11,5"]);
    let car: Vec<&str> = out
        .lines()
        .find(|l| l.starts_with("car"))
        .unwrap()
        .split_whitespace()
        .skip(1)
        .collect();
    assert_eq!(car.join(","), "6,2,10,9,4,3,5,14,12,1,8,13,7,11,15");
    let forest = out.lines().last().unwrap();
    assert_eq!(ok(&["map", forest]), "10,2,6,5,7,1,13,10,4,1,14,9,11,5\n");
    assert_eq!(ok(&["stats", forest]).lines().next(), Some("inv 7"));
}

#[test]
fn map_trace_ends_with_parking_function() {
    let out = ok(&["map", "--trace", "0,0"]);
    assert!(out.contains("C-I"));
    assert_eq!(out.lines().last(), Some("2,1"));
}

#[test]
fn pa_reports_overflow() {
    assert_eq!(ok(&["pa", "4,3,3,1,5"]), "q 4,3,5,1,6\nparking function: no\n");
    assert_eq!(code(&["pa", "0,1"]), 2);
}

#[test]
fn stats_examples() {
    let pf = ok(&["stats", "2,4,2,1,3"]);
    assert!(pf.starts_with("jump 3\nlucky 3\n"), "{pf}");
    let forest = ok(&["stats", "2,0"]);
    assert!(forest.starts_with("inv 1\nlead 1\ntree 1\n"), "{forest}");
    let o = run(&["stats", "4,3,3,1,5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("not a parking function"));
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn stats_flags_override_detection() {
    assert!(ok(&["stats", "--parking", "1"]).starts_with("jump 0"));
    assert!(ok(&["stats", "--forest", "0"]).starts_with("inv 0"));
    assert_eq!(code(&["stats", "--forest", "1"]), 2);
}

#[test]
fn bad_inputs_exit_two() {
    assert_eq!(code(&["map", "1,2"]), 2);
    assert_eq!(code(&["map", "x"]), 2);
    assert_eq!(code(&["unmap", "3,3"]), 2);
    assert_eq!(code(&["verify", "--n", "8", "--exhaustive"]), 2);
    assert_eq!(code(&["verify", "--n", "3"]), 2);
    assert_eq!(code(&["poly", "--n", "9"]), 2);
}

#[test]
fn verify_small_exhaustive() {
    let out = ok(&["verify", "--n", "2", "--exhaustive"]);
    assert!(out.contains("3/3 forests") && out.contains("PASS"), "{out}");
}

#[test]
fn verify_random_large() {
    let out = ok(&["verify", "--n", "500", "--random", "1000", "--seed", "42"]);
    assert!(out.contains("1000 forest roundtrips") && out.contains("PASS"), "{out}");
}

#[test]
fn json_output_is_stable() {
    let args = ["--json", "verify", "--n", "4", "--exhaustive"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["forestCount"], 125);
    assert_eq!(v["success"], true);
    let args = ["--json", "verify", "--n", "30", "--random", "50", "--seed", "7"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn json_map_and_stats() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["--json", "map", "0,0"])).unwrap();
    assert_eq!(v["parkingFunction"], serde_json::json!([2, 1]));
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["--json", "stats", "2,4,2,1,3"])).unwrap();
    assert_eq!(v["jumpTotal"], 3);
    assert_eq!(v["luckyCars"], serde_json::json!([1, 2, 4]));
}

#[test]
fn poly_examples() {
    let out = ok(&["poly", "--n", "2"]);
    assert!(out.contains("over parking functions (3 terms)"), "{out}");
    let out = ok(&["poly", "--n", "3", "--compare-product"]);
    assert!(out.contains("2u + 8u² + 6u³"));
    let out = ok(&["poly", "--n", "6", "--compare-product"]);
    assert!(!out.contains("FAIL"));
    ok(&["poly", "--n", "0", "--compare-product"]);
    ok(&["poly", "--n", "8"]);
}
