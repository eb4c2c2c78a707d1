use std::io::Write;
use std::process::{Command, Output, Stdio};

fn rexlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rexlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn ok(args: &[&str]) -> String {
    let o = rexlab(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn reduces_to_normal_form() {
    assert_eq!(ok(&["reduce", "--calculus", "rex", r"(\ 1) 2"]), "2");
    assert_eq!(ok(&["reduce", "--calculus", "regc", r"(\ (\ 1)) 2"]), r"\ 1");
    assert_eq!(ok(&["normalize", "-c", "rex", "-s", "ri", r"(\ \ 2 1) ((\ 1) 3) 4"]), "3 4");
    assert_eq!(ok(&["reduce", "-c", "x", r"(\x. x) y"]), "y");
}

#[test]
fn zero_step_budget_on_a_normal_form_succeeds() {
    assert_eq!(ok(&["reduce", "--calculus", "dB", "--max-steps", "0", "1"]), "1");
}

#[test]
fn divergence_exits_with_bound_code() {
    let o = rexlab(&["reduce", "-c", "dB", "--max-steps", "10", r"(\ 1 1) (\ 1 1)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("10 steps"));
}

#[test]
fn json_trace_is_schema_stable() {
    let out = ok(&["reduce", "-c", "rex", "--trace", "--format", "json", r"(\ 1) 2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"], "2");
    assert_eq!(v["status"], "normal");
    assert_eq!(v["steps"], 2);
    let steps = v["trace"]["steps"].as_array().unwrap();
    assert_eq!(steps[0]["rule"], "Beta");
    assert_eq!(steps[1]["after"], "2");
    let plain = ok(&["reduce", "-c", "rex", "--format", "json", r"(\ 1) 2"]);
    let v: serde_json::Value = serde_json::from_str(&plain).unwrap();
    assert!(v["trace"].is_null());
}

#[test]
fn meta_operators() {
    assert_eq!(ok(&["meta", "swap", "1", "1 2"]), "2 1");
    assert_eq!(ok(&["meta", "inc", "0", r"\ 1 2"]), r"\ 1 3");
    assert_eq!(ok(&["meta", "db-subst", r"\ 2", "1", "3"]), r"\ 4");
    assert_eq!(ok(&["meta", "r-subst", "1 2", r"\ 1"]), r"(\ 1) 1");
    let o = rexlab(&["meta", "dec", "1", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = rexlab(&["meta", "swap", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn translation_both_ways() {
    assert_eq!(ok(&["translate", "--to", "named", r"\ (1 2)"]), r"\x2. x2 x1");
    assert_eq!(ok(&["translate", "--to", "named", "--vars", "a,b", "1 2"]), "a b");
    assert_eq!(ok(&["translate", "--to", "indexed", r"\x2. x2 x1"]), r"\ 1 2");
    assert_eq!(ok(&["translate", "--to", "indexed", "--vars", "y", r"\x. x y"]), r"\ 1 2");
}

#[test]
fn parse_and_fv() {
    assert_eq!(ok(&["parse", r"(\1)  2"]), r"(\ 1) 2");
    assert_eq!(ok(&["fv", r"\ 2 3"]), "{1,2}");
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["parse", "--world", "named", "--format", "json", r"\x. x y"])).unwrap();
    assert_eq!(v["world"], "named");
    assert_eq!(v["fv"], serde_json::json!(["y"]));
}

#[test]
fn reads_standard_input_and_files() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rexlab"))
        .args(["reduce", "-c", "rex"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br"(\ 1) 2").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "2");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    std::fs::write(&path, "1 2\n").unwrap();
    assert_eq!(ok(&["parse", "--file", path.to_str().unwrap()]), "1 2");
}

#[test]
fn usage_and_parse_errors_exit_one() {
    assert_eq!(rexlab(&["reduce", "-c", "rex", "(1"]).status.code(), Some(1));
    assert_eq!(rexlab(&["reduce", "-c", "nope", "1"]).status.code(), Some(1));
    assert_eq!(rexlab(&["parse", "--file", "f", "1"]).status.code(), Some(1));
    assert_eq!(rexlab(&["check", "cor1", "--cases", "3"]).status.code(), Some(1));
    assert_eq!(rexlab(&[]).status.code(), Some(1));
    assert_eq!(rexlab(&["--help"]).status.code(), Some(0));
    assert_eq!(rexlab(&["--version"]).status.code(), Some(0));
}

#[test]
fn check_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = ok(&["check", "cor1", "--size", "6", "--report", path.to_str().unwrap()]);
    assert!(out.contains("pass"));
    assert!(out.ends_with(&format!("report: {}", path.display())));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["property"], "cor1");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["failures"], 0);
    assert!(v["universe"].as_u64().unwrap() > 0);
}

#[test]
fn check_default_report_name_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_rexlab"))
        .args(["check", "parse-roundtrip", "--random", "--cases", "40"])
        .env("REXLAB_SEED", "7")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("rexlab-report-parse-roundtrip.json").exists());
}

#[test]
fn enumerate_lists_and_counts() {
    assert_eq!(ok(&["enumerate", "--max-size", "2", "--fv", "1"]).lines().count(), 3);
    assert_eq!(ok(&["enumerate", "--max-size", "5", "--fv", "2", "--count"]), "126");
}
