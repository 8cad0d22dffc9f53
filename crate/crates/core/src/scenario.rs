//! Scenario files: line-delimited JSON.
//!
//! An optional header line `{"seed": 42, "config": {...}}` may precede the
//! entries. Each entry is
//! `{"t_ms": int, "channel": "touch|word|gaze|proximity", "payload": {...}}`
//! with payloads `{"region": "front"}`, `{"text": "hello"}`,
//! `{"angle_deg": 5.0}` and `{"distance_m": 0.5}`. Blank lines and lines
//! starting with `#` are ignored.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::engine::Sample;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("line {line}: t_ms {t_ms} is earlier than the previous entry ({prev})")]
    Unsorted { line: usize, t_ms: u64, prev: u64 },
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl ScenarioError {
    /// Validation problems as opposed to I/O failures.
    pub fn is_validation(&self) -> bool {
        !matches!(self, ScenarioError::Io { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEntry {
    pub t_ms: u64,
    #[serde(flatten)]
    pub sample: Sample,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub seed: u64,
    pub config: Map<String, Value>,
    pub entries: Vec<ScenarioEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    config: Map<String, Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    t_ms: u64,
    channel: String,
    payload: Value,
}

fn parse_sample(channel: &str, payload: Value) -> Result<Sample, String> {
    let Value::Object(p) = payload else {
        return Err("payload must be an object".into());
    };
    let field = |name: &str| p.get(name).ok_or_else(|| format!("{channel} payload needs {name:?}"));
    let allow_only = |name: &str| match p.keys().find(|k| *k != name) {
        Some(extra) => Err(format!("unexpected {channel} payload field {extra:?}")),
        None => Ok(()),
    };
    let number = |name: &str| field(name)?.as_f64().ok_or_else(|| format!("{name} must be a number"));
    let sample = match channel {
        "touch" => {
            allow_only("region")?;
            let region = field("region")?.as_str().ok_or("region must be a string")?;
            Sample::Touch { region: region.parse().map_err(|e| format!("{e}"))? }
        }
        "word" => {
            allow_only("text")?;
            let text = field("text")?.as_str().ok_or("text must be a string")?;
            Sample::Word { text: text.to_string() }
        }
        "gaze" => {
            allow_only("angle_deg")?;
            Sample::Gaze { angle_deg: number("angle_deg")? }
        }
        "proximity" => {
            allow_only("distance_m")?;
            Sample::Proximity { distance_m: number("distance_m")? }
        }
        other => return Err(format!("unknown channel {other:?}")),
    };
    sample.validate().map_err(|e| e.to_string())?;
    Ok(sample)
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let mut scenario = Scenario::default();
        let mut prev: Option<u64> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |detail: String| ScenarioError::Parse { line, detail };
            let value: Value = serde_json::from_str(trimmed).map_err(|e| err(e.to_string()))?;
            let is_entry = value.get("t_ms").is_some();
            if !is_entry {
                if prev.is_some() {
                    return Err(err("header must precede all entries".into()));
                }
                let header: Header = serde_json::from_value(value).map_err(|e| err(e.to_string()))?;
                scenario.seed = header.seed;
                scenario.config = header.config;
                continue;
            }
            let entry: RawEntry = serde_json::from_value(value).map_err(|e| err(e.to_string()))?;
            if let Some(p) = prev {
                if entry.t_ms < p {
                    return Err(ScenarioError::Unsorted { line, t_ms: entry.t_ms, prev: p });
                }
            }
            prev = Some(entry.t_ms);
            let sample = parse_sample(&entry.channel, entry.payload).map_err(err)?;
            scenario.entries.push(ScenarioEntry { t_ms: entry.t_ms, sample });
        }
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_path_buf(), source })?;
        Scenario::parse(&text)
    }

    pub fn last_t_ms(&self) -> Option<u64> {
        self.entries.last().map(|e| e.t_ms)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&serde_json::json!({ "seed": self.seed, "config": self.config }))
            .expect("header serializes");
        out.push('\n');
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("entries serialize"));
            out.push('\n');
        }
        out
    }
}
