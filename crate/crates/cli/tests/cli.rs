use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn dtrans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtrans"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_config(body: &str) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    fs::write(&path, body).unwrap();
    dtrans(&["run", "--config", path.to_str().unwrap()])
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("error is JSON")
}

#[test]
fn sobolev_chain_passes() {
    let out = run_config(r#"{"kind":"sobolev","parameters":{"n":1,"r":0}}"#);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["all_pass"], Value::Bool(true));
    let checks = v["result"]["report"]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == Value::Bool(true)));
}

#[test]
fn knr_three_is_thick() {
    let out = run_config(
        r#"{"kind":"families","parameters":{"set":{"kind":"knr","nmax":3},"tests":[{"name":"thick","length":3}]}}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["set"]["representation"], "runs");
    assert_eq!(v["result"]["tests"][0]["verdict"]["verdict"], "holds-on-window");
}

#[test]
fn malformed_json_exits_two() {
    let out = run_config("{\"kind\": ");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "validation");
}

#[test]
fn unknown_fields_are_named() {
    let out = run_config(r#"{"kind":"sobolev","parameters":{"n":1,"r":0,"extra":true}}"#);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["fields"][0], "parameters.extra");

    let out = run_config(r#"{"kind":"sobolev","parameters":{"n":1,"r":0},"colour":1}"#);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["fields"][0], "colour");
}

#[test]
fn nested_field_path() {
    let out = run_config(
        r#"{"kind":"shift","parameters":{"weights":{"side":"bilateral","rule":{"kind":"constant","c":2}},
            "df":{"powers":[1],"test":{"name":"syndetic","max_gap":"x"},"m_max":8}}}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    let field = stderr_json(&out)["fields"][0].as_str().unwrap().to_string();
    assert!(field.starts_with("parameters.df.test"), "{field}");
}

#[test]
fn unsupported_format_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    fs::write(&path, r#"{"kind":"rhc","parameters":{"set":{"kind":"ap","start":0,"step":3,"horizon":90},"r":1,"k_max":9,"s":9,"delta":0.1}}"#).unwrap();
    let out = dtrans(&["run", "--config", path.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["fields"][0], "output.formats");
}

#[test]
fn catalog_is_sorted_and_stable() {
    let a = dtrans(&["catalog"]);
    let b = dtrans(&["catalog"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().any(|l| l.trim() == "step"));
    assert!(text.lines().any(|l| l.trim() == "knr"));
    for block in text.split(":\n").skip(1) {
        let names: Vec<&str> = block.lines().filter(|l| l.starts_with("  ")).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        assert_eq!(names, sorted);
    }
}

#[test]
fn presets_reproduce_byte_identical_reports() {
    for preset in ["families-knr", "rhc-multiples-of-three", "shift-step", "sobolev-fknr"] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        for d in [&a, &b] {
            let out = dtrans(&["run", "--preset", preset, "--out", d.path().to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0), "{preset}");
        }
        let ra = fs::read(a.path().join("report.json")).unwrap();
        let rb = fs::read(b.path().join("report.json")).unwrap();
        assert_eq!(ra, rb, "{preset}");
    }
}

#[test]
fn qk_preset_writes_all_formats() {
    let d = tempfile::tempdir().unwrap();
    let out = dtrans(&["run", "--preset", "qk-separation", "--out", d.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(d.path().join("report.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    let csv = fs::read_to_string(d.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("k,distance,distance_lower,status"));
    let v: Value = serde_json::from_slice(&fs::read(d.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["ball_shrink"]["verdict"], "holds-on-window");
}

#[test]
fn undecided_exits_three() {
    // At k = 63 the iteration cap leaves the distance bracketed in
    // [0.04597591684, 0.04597591709]; a radius inside it decides nothing.
    let out = run_config(
        r#"{"kind":"qk","parameters":{"separation":{"k_list":[63],
            "v":{"center":[[1,0],[0,0],[-3,0],[0,0]],"radius":0.04597591696}}}}"#,
    );
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["undecided"], Value::Bool(true));
    assert_eq!(v["result"]["separation"]["undecided"][0], 63);
}
