use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("idt-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = scratch(name).join("run.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn idt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idt"))
        .args(args)
        .env_remove("IDT_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

const PATH_CONFIG: &str = r#"
count = 5
seed = 3

[target]
kind = "levy_path"
times = [0.0, 0.5, 1.0]
model = { family = "brownian_drift", drift = 0.0, variance = 1.0 }
"#;

#[test]
fn brownian_path_has_one_row_per_time() {
    let cfg = write_config("path", PATH_CONFIG);
    let o = idt(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "time,r0,r1,r2,r3,r4");
    assert_eq!(lines.len(), 4);
    assert!(lines[1]
        .split(',')
        .skip(1)
        .all(|v| v.parse::<f64>().unwrap() == 0.0));
}

#[test]
fn repeated_seed_is_byte_identical() {
    let cfg = write_config("repeat", PATH_CONFIG);
    let dir = cfg.parent().unwrap().to_path_buf();
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    for out in [&a, &b] {
        let o = idt(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "99",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let other = idt(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "100",
    ]);
    assert_ne!(stdout(&other).into_bytes(), std::fs::read(&a).unwrap());
}

#[test]
fn sheet_grid_shape() {
    let cfg = write_config(
        "sheet",
        r#"
[target]
kind = "levy_sheet"
s_times = [0.0, 1.0, 2.0, 3.0]
t_times = [0.0, 1.0, 2.0, 3.0]
model = { family = "brownian_drift", drift = 0.0, variance = 1.0 }
"#,
    );
    let o = idt(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l.split(',').count() == 5));
}

#[test]
fn unknown_family_is_a_config_error() {
    let cfg = write_config(
        "unknown",
        r#"
[target]
kind = "levy_path"
times = [0.0, 1.0]
model = { family = "nonsense_family" }
"#,
    );
    let o = idt(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonsense_family"));
}

#[test]
fn verify_rejects_tiny_counts_and_unknown_suites() {
    assert_eq!(
        idt(&["verify", "--suite", "ito", "--count", "10"])
            .status
            .code(),
        Some(2)
    );
    let o = idt(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope"));
}

#[test]
fn counterexamples_meet_expectations() {
    let report = scratch("verify").join("report.json");
    let o = idt(&[
        "verify",
        "--suite",
        "counterexamples",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("5/5 expectations met"));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(json["items"].as_array().unwrap().len(), 5);
}

#[test]
fn catalogue_lists_every_construction() {
    let o = idt(&["catalogue", "--json"]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = json
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 16);
    assert!(names.contains(&"measure_mix") && names.contains(&"sato_mix"));
}
