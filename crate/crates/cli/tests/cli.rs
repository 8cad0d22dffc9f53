use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affect-sim")).args(args).output().expect("binary runs")
}

fn demo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/demo.scn")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_good_scenario() {
    let out = sim(&["validate", demo().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok"));
}

#[test]
fn validate_unsorted_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "unsorted.scn",
        "{\"t_ms\": 10, \"channel\": \"word\", \"payload\": {\"text\": \"hi\"}}\n{\"t_ms\": 5, \"channel\": \"word\", \"payload\": {\"text\": \"hi\"}}\n",
    );
    let out = sim(&["validate", &p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_file_is_io_error() {
    assert_eq!(sim(&["validate", "/nonexistent/x.scn"]).status.code(), Some(2));
    assert_eq!(sim(&["replay", "/nonexistent/x.jsonl"]).status.code(), Some(2));
}

#[test]
fn run_twice_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for out in [&a, &b] {
        let o = sim(&["run", demo().to_str().unwrap(), "--seed", "7", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(a).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(b).unwrap());
}

#[test]
fn config_overlay_and_bad_keys() {
    let dir = tempfile::tempdir().unwrap();
    let scn = write(dir.path(), "s.scn", "{\"t_ms\": 0, \"channel\": \"word\", \"payload\": {\"text\": \"hello\"}}\n");
    let good = write(dir.path(), "good.json", "{\"noise_sigma\": 0.0, \"mood_range_r\": 0.0}");
    let o = sim(&["run", &scn, "--config", &good]);
    assert_eq!(o.status.code(), Some(0));
    let log = String::from_utf8(o.stdout).unwrap();
    assert!(log.contains(r#""type":"appraisal","body":{"event_id":0,"valence":0.4,"arousal":0.4,"#));
    assert!(log.contains(r#""type":"response","body":{"event_id":0,"label":"Excited"}"#), "{log}");

    let bad = write(dir.path(), "bad.json", "{\"noise_sigmaa\": 0.0}");
    assert_eq!(sim(&["run", &scn, "--config", &bad]).status.code(), Some(1));
    assert_eq!(sim(&["run", &scn, "--config", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn duration_shorter_than_scenario_is_rejected() {
    let o = sim(&["run", demo().to_str().unwrap(), "--duration-ms", "10"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn replay_pretty_prints_every_record() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("demo.jsonl");
    sim(&["run", demo().to_str().unwrap(), "--out", log.to_str().unwrap()]);
    let records = std::fs::read_to_string(&log).unwrap().lines().count();
    let o = sim(&["replay", log.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), records);
    assert!(text.contains("day_boundary"));

    let broken = write(dir.path(), "broken.jsonl", "{\"t_ms\": 5, \"type\": \"mood\"}\n");
    assert_eq!(sim(&["replay", &broken]).status.code(), Some(1));
}
