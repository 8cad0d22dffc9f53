//! Deterministic scenario runner.

use serde_json::{Map, Value};

use crate::config::{ConfigError, EngineConfig};
use crate::engine::{Engine, EngineError};
use crate::log::RunLog;
use crate::scenario::Scenario;

/// Extra simulated time after the last entry when no duration is given,
/// enough for a trailing gesture window and its response to play out.
pub const DEFAULT_TAIL_MS: u64 = 10_000;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub duration_ms: Option<u64>,
    /// Recorded in the engine config; simulated time alone drives the run.
    pub compression: Option<f64>,
    pub seed: Option<u64>,
    /// Applied after the scenario's own overrides.
    pub config: Option<Map<String, Value>>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("duration {duration_ms} ms ends before the last entry at {last_ms} ms")]
    DurationTooShort { duration_ms: u64, last_ms: u64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub fn resolve_config(scenario: &Scenario, opts: &RunOptions) -> Result<EngineConfig, ConfigError> {
    let mut cfg = EngineConfig::default().overlay(&scenario.config)?;
    if let Some(extra) = &opts.config {
        cfg = cfg.overlay(extra)?;
    }
    if let Some(c) = opts.compression {
        let mut patch = Map::new();
        patch.insert("time_compression".into(), Value::from(c));
        cfg = cfg.overlay(&patch)?;
    }
    Ok(cfg)
}

/// Replays every entry through a fresh engine and advances to the end of
/// the run. Identical inputs give byte-identical logs.
pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<RunLog, RunError> {
    let cfg = resolve_config(scenario, opts)?;
    let last = scenario.last_t_ms();
    let duration_ms = opts.duration_ms.unwrap_or_else(|| last.map_or(DEFAULT_TAIL_MS, |t| t + DEFAULT_TAIL_MS));
    if let Some(last_ms) = last.filter(|&l| l > duration_ms) {
        return Err(RunError::DurationTooShort { duration_ms, last_ms });
    }
    let mut engine = Engine::new(cfg, opts.seed.unwrap_or(scenario.seed))?;
    let mut records = Vec::new();
    engine.start(&mut records);
    for entry in &scenario.entries {
        engine.ingest(entry.t_ms, &entry.sample, &mut records)?;
    }
    engine.advance_to(duration_ms, &mut records);
    Ok(RunLog { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duration_must_cover_entries() {
        let s = Scenario::parse(r#"{"t_ms": 500, "channel": "word", "payload": {"text": "hi"}}"#).unwrap();
        let opts = RunOptions { duration_ms: Some(100), ..Default::default() };
        assert!(matches!(run(&s, &opts), Err(RunError::DurationTooShort { duration_ms: 100, last_ms: 500 })));
    }

    #[test]
    fn cli_config_wins_over_scenario() {
        let s = Scenario::parse(r#"{"config": {"eta": 0.2, "mood_gain": 0.1}}"#).unwrap();
        let mut extra = Map::new();
        extra.insert("eta".into(), Value::from(0.3));
        let cfg = resolve_config(&s, &RunOptions { config: Some(extra), compression: Some(50.0), ..Default::default() }).unwrap();
        assert_eq!((cfg.eta, cfg.mood_gain, cfg.time_compression), (0.3, 0.1, 50.0));
    }
}
