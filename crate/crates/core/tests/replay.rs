use std::path::PathBuf;

use affect_core::harness::{run, RunOptions};
use affect_core::log::{RecordBody, RunLog};
use affect_core::{EmotionLabel, Reason, Scenario};

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn demo() -> Scenario {
    Scenario::load(&scenario_dir().join("demo.scn")).expect("demo scenario loads")
}

fn run_jsonl(s: &Scenario, opts: &RunOptions) -> String {
    run(s, opts).expect("run succeeds").to_jsonl()
}

/// Set UPDATE_GOLDEN=1 to rewrite the committed log after an intended change.
#[test]
fn demo_matches_golden_log() {
    let golden_path = scenario_dir().join("demo.golden.jsonl");
    let got = run_jsonl(&demo(), &RunOptions { seed: Some(42), ..Default::default() });
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden_path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&golden_path).expect("golden log committed");
    if got != want {
        let line = got.lines().zip(want.lines()).position(|(a, b)| a != b);
        panic!("demo log diverges from golden at line {:?}", line.map(|l| l + 1));
    }
}

#[test]
fn demo_is_byte_identical_across_runs() {
    let opts = RunOptions { seed: Some(7), ..Default::default() };
    assert_eq!(run_jsonl(&demo(), &opts), run_jsonl(&demo(), &opts));
}

#[test]
fn demo_exercises_every_record_type() {
    let log = run(&demo(), &RunOptions::default()).unwrap();
    for ty in ["event", "appraisal", "response", "directive", "needs", "mood", "temperament", "day_boundary"] {
        assert!(log.count(ty) > 0, "no {ty} records");
    }
    assert!(log.directives().any(|d| d.reason == Reason::NeedPrompt));
}

#[test]
fn compression_does_not_change_the_log() {
    let s = demo();
    let slow = run_jsonl(&s, &RunOptions { compression: Some(1.0), ..Default::default() });
    let fast = run_jsonl(&s, &RunOptions { compression: Some(1000.0), ..Default::default() });
    assert_eq!(slow, fast);
}

#[test]
fn log_round_trips_and_is_well_formed() {
    let text = run_jsonl(&demo(), &RunOptions::default());
    let parsed = RunLog::parse_jsonl(&text).expect("log re-parses");
    for (a, b) in parsed.to_jsonl().lines().zip(text.lines()) {
        assert_eq!(a, b);
    }
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let obj = v.as_object().unwrap();
        assert_eq!(obj.len(), 3, "{line}");
        assert!(obj["t_ms"].is_u64() && obj["type"].is_string() && obj["body"].is_object());
    }
}

#[test]
fn sixty_empty_days() {
    let s = Scenario::parse(r#"{"seed": 1, "config": {"day_length_s": 60}}"#).unwrap();
    let log = run(&s, &RunOptions { duration_ms: Some(60 * 60_000), compression: Some(1e6), ..Default::default() }).unwrap();
    assert_eq!(log.count("day_boundary"), 60);
    assert_eq!(log.count("mood"), 60);
    assert_eq!(log.count("event"), log.count("appraisal"));
}

#[test]
fn single_stroke_zero_noise() {
    let s = Scenario::parse(
        r#"{"seed": 42, "config": {"noise_sigma": 0.0, "mood_range_r": 0.0}}
{"t_ms": 0, "channel": "touch", "payload": {"region": "front"}}
{"t_ms": 400, "channel": "touch", "payload": {"region": "back"}}"#,
    )
    .unwrap();
    let log = run(&s, &RunOptions::default()).unwrap();
    let appraisals: Vec<_> = log
        .records
        .iter()
        .filter_map(|r| match &r.body {
            RecordBody::Appraisal(a) => Some((a.valence, a.arousal)),
            _ => None,
        })
        .collect();
    assert_eq!(appraisals, vec![(0.6, 0.3)]);
    let responses: Vec<_> = log.directives().filter(|d| d.reason == Reason::Response).collect();
    assert_eq!(responses.len(), 1);
    assert_eq!(responses[0].face, EmotionLabel::Happy);
}
