use std::process::{Command, Output};

fn zhl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zhl")).args(args).env_remove("ZHL_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_value_and_method() {
    let o = zhl(&["eval", "--kernel", "riemann", "--z", "2", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1.644934066848"), "{out}");
    assert!(out.contains("mellin"));
}

#[test]
fn json_lines_parse() {
    let o = zhl(&["--format", "json", "eval", "--z=-1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["value"][0].as_f64().unwrap() + 1.0 / 12.0).abs() < 1e-12);
    assert!(v.get("timestamp").is_some());
    let o = zhl(&["--format", "json", "--no-timestamp", "eval", "--z=-1"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v.get("timestamp").is_none());
}

#[test]
fn exit_codes() {
    assert_eq!(zhl(&["eval", "--kernel", "bogus", "--z", "2"]).status.code(), Some(1));
    assert_eq!(zhl(&["eval", "--z", "2+"]).status.code(), Some(1));
    assert_eq!(zhl(&["frobnicate"]).status.code(), Some(1));
    let pole = zhl(&["eval", "--z", "1"]);
    assert_eq!(pole.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&pole.stderr).contains("pole"));
    let threads = Command::new(env!("CARGO_BIN_EXE_zhl")).args(["eval", "--z", "2"]).env("ZHL_THREADS", "zero").output().unwrap();
    assert_eq!(threads.status.code(), Some(1));
}

#[test]
fn zeros_fill_a_cache_without_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("zeros.csv");
    let cache = cache.to_str().unwrap();
    for _ in 0..2 {
        let o = zhl(&["--format", "csv", "zeros", "--t-min", "10", "--t-max", "22", "--cache", cache]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(cache).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kernel,re,im,residual,E_re,E_im,method,verified_count");
    assert_eq!(lines.len(), 3, "{text}");
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "riemann");
    assert!((first[1].parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
    assert!((first[2].parse::<f64>().unwrap() - 14.134725141734693).abs() < 1e-8);

    let o = zhl(&["spectrum", "--from-cache", cache]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-28.26945"), "{}", stdout(&o));
}

#[test]
fn verify_suites_pass() {
    for suite in ["functional", "oracle", "eigen"] {
        let o = zhl(&["verify", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn failed_verification_exits_three() {
    let o = zhl(&["verify", "--suite", "oracle", "--em-terms", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}
