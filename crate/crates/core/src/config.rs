//! Engine configuration. One flat JSON object; every key is optional and
//! falls back to the default below, unknown keys are rejected.
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `appraisal_mood_weight` | 0.25 | weight of the current mood in an appraisal |
//! | `appraisal_temperament_weight` | 0.15 | weight of the temperament in an appraisal |
//! | `noise_sigma` | 0.05 | std-dev of the Gaussian noise added to appraisals |
//! | `band_boundary` | 1/3 | half-width of the middle valence/arousal band |
//! | `base_affect` | see [`BaseAffectTable`] | per-event `[valence, arousal]` seeds |
//! | `decay_rates` | touch 0.001, social 0.0008, hunger 0.0005, rest_active 0.0005, rest_idle_regen 0.01 | meter change per simulated second |
//! | `thresholds` | prompt 0.3, critical 0.1, rearm 0.5 | need prompt levels |
//! | `replenish` | see [`ReplenishTable`] | meter increments per event kind |
//! | `idle_after_s` | 120 | seconds without interaction before rest regenerates |
//! | `eta` | 0.05 | daily temperament learning rate |
//! | `mood_gain` | 0.02 | per-appraisal mood feedback gain |
//! | `mood_range_r` | 0.2 | half-width of the daily mood box around the temperament |
//! | `day_length_s` | 86400 | simulated seconds per day |
//! | `time_compression` | 1 | simulated seconds per wall second (live service only) |
//! | `initial_temperament` | `[0, 0]` | starting temperament |
//! | `stroke_window_ms` | 1500 | gesture window |
//! | `lateral_with_grain` | true | treat left↔right strokes as with-grain |
//! | `gaze_eye_deg` / `gaze_away_deg` / `gaze_dwell_ms` | 15 / 90 / 2000 | gaze bands |
//! | `near_m` / `far_m` / `proximity_sustain_ms` | 1.0 / 3.0 / 10000 | proximity zones |
//! | `aura_arousal_threshold` / `sound_arousal_threshold` | 0.5 / 0.6 | response emphasis tiers |
//! | `response_duration_ms` / `need_duration_ms` / `passive_duration_ms` | 3000 / 5000 / 60000 | directive durations |
//! | `hue` | negative 0, neutral 60, positive 120 | aura hue anchors in degrees |
//! | `lexicon_path` | none | word list replacing the built-in lexicon |

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::affect::{VaPoint, DEFAULT_BAND_BOUNDARY};
use crate::appraisal::{AppraisalWeights, EventKind};
use crate::display::{DisplayParams, HueMap};
use crate::interaction::{GazeParams, InteractionError, Lexicon, ProximityParams, StrokeParams};
use crate::needs::{DecayRates, ReplenishTable, Thresholds};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config: expected a JSON object")]
    NotAnObject,
    #[error("config: {0}")]
    Invalid(String),
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Lexicon(#[from] InteractionError),
}

/// Intrinsic `[valence, arousal]` seed per event kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaseAffectTable {
    #[serde(rename = "StrokeWithGrain")]
    pub stroke_with_grain: [f64; 2],
    #[serde(rename = "StrokeAgainstGrain")]
    pub stroke_against_grain: [f64; 2],
    #[serde(rename = "Pat")]
    pub pat: [f64; 2],
    #[serde(rename = "WordGreeting")]
    pub word_greeting: [f64; 2],
    #[serde(rename = "WordPraise")]
    pub word_praise: [f64; 2],
    #[serde(rename = "WordScold")]
    pub word_scold: [f64; 2],
    #[serde(rename = "WordFeed")]
    pub word_feed: [f64; 2],
    #[serde(rename = "WordUnknown")]
    pub word_unknown: [f64; 2],
    #[serde(rename = "EyeContact")]
    pub eye_contact: [f64; 2],
    #[serde(rename = "LookingAway")]
    pub looking_away: [f64; 2],
    #[serde(rename = "ApproachNear")]
    pub approach_near: [f64; 2],
    #[serde(rename = "DepartFar")]
    pub depart_far: [f64; 2],
    #[serde(rename = "SustainedNear")]
    pub sustained_near: [f64; 2],
    /// Shared by every internally generated need prompt.
    #[serde(rename = "NeedPrompt")]
    pub need_prompt: [f64; 2],
}

impl Default for BaseAffectTable {
    fn default() -> Self {
        BaseAffectTable {
            stroke_with_grain: [0.6, 0.3],
            stroke_against_grain: [-0.5, 0.5],
            pat: [0.3, 0.2],
            word_greeting: [0.4, 0.4],
            word_praise: [0.6, 0.3],
            word_scold: [-0.6, 0.5],
            word_feed: [0.5, 0.4],
            word_unknown: [0.0, 0.1],
            eye_contact: [0.3, 0.4],
            looking_away: [-0.3, -0.2],
            approach_near: [0.4, 0.5],
            depart_far: [-0.4, -0.1],
            sustained_near: [0.3, -0.2],
            need_prompt: [-0.3, 0.2],
        }
    }
}

impl BaseAffectTable {
    pub fn get(&self, kind: EventKind) -> VaPoint {
        let raw = match kind {
            EventKind::StrokeWithGrain => self.stroke_with_grain,
            EventKind::StrokeAgainstGrain => self.stroke_against_grain,
            EventKind::Pat => self.pat,
            EventKind::WordGreeting => self.word_greeting,
            EventKind::WordPraise => self.word_praise,
            EventKind::WordScold => self.word_scold,
            EventKind::WordFeed => self.word_feed,
            EventKind::WordUnknown => self.word_unknown,
            EventKind::EyeContact => self.eye_contact,
            EventKind::LookingAway => self.looking_away,
            EventKind::ApproachNear => self.approach_near,
            EventKind::DepartFar => self.depart_far,
            EventKind::SustainedNear => self.sustained_near,
            EventKind::NeedPrompt(_) => self.need_prompt,
        };
        VaPoint { valence: raw[0], arousal: raw[1] }
    }

    fn entries(&self) -> [[f64; 2]; 14] {
        [
            self.stroke_with_grain,
            self.stroke_against_grain,
            self.pat,
            self.word_greeting,
            self.word_praise,
            self.word_scold,
            self.word_feed,
            self.word_unknown,
            self.eye_contact,
            self.looking_away,
            self.approach_near,
            self.depart_far,
            self.sustained_near,
            self.need_prompt,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub appraisal_mood_weight: f64,
    pub appraisal_temperament_weight: f64,
    pub noise_sigma: f64,
    pub band_boundary: f64,
    pub base_affect: BaseAffectTable,
    pub decay_rates: DecayRates,
    pub thresholds: Thresholds,
    pub replenish: ReplenishTable,
    pub idle_after_s: f64,
    pub eta: f64,
    pub mood_gain: f64,
    pub mood_range_r: f64,
    pub day_length_s: f64,
    pub time_compression: f64,
    pub initial_temperament: [f64; 2],
    pub stroke_window_ms: u64,
    pub lateral_with_grain: bool,
    pub gaze_eye_deg: f64,
    pub gaze_away_deg: f64,
    pub gaze_dwell_ms: u64,
    pub near_m: f64,
    pub far_m: f64,
    pub proximity_sustain_ms: u64,
    pub aura_arousal_threshold: f64,
    pub sound_arousal_threshold: f64,
    pub response_duration_ms: u64,
    pub need_duration_ms: u64,
    pub passive_duration_ms: u64,
    pub hue: HueMap,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon_path: Option<PathBuf>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        let weights = AppraisalWeights::default();
        let stroke = StrokeParams::default();
        let gaze = GazeParams::default();
        let prox = ProximityParams::default();
        let display = DisplayParams::default();
        EngineConfig {
            appraisal_mood_weight: weights.mood,
            appraisal_temperament_weight: weights.temperament,
            noise_sigma: 0.05,
            band_boundary: DEFAULT_BAND_BOUNDARY,
            base_affect: BaseAffectTable::default(),
            decay_rates: DecayRates::default(),
            thresholds: Thresholds::default(),
            replenish: ReplenishTable::default(),
            idle_after_s: 120.0,
            eta: 0.05,
            mood_gain: 0.02,
            mood_range_r: 0.2,
            day_length_s: 86_400.0,
            time_compression: 1.0,
            initial_temperament: [0.0, 0.0],
            stroke_window_ms: stroke.window_ms,
            lateral_with_grain: stroke.lateral_with_grain,
            gaze_eye_deg: gaze.eye_deg,
            gaze_away_deg: gaze.away_deg,
            gaze_dwell_ms: gaze.dwell_ms,
            near_m: prox.near_m,
            far_m: prox.far_m,
            proximity_sustain_ms: prox.sustain_ms,
            aura_arousal_threshold: display.aura_arousal,
            sound_arousal_threshold: display.sound_arousal,
            response_duration_ms: display.response_ms,
            need_duration_ms: display.need_ms,
            passive_duration_ms: display.passive_ms,
            hue: display.hue,
            lexicon_path: None,
        }
    }
}

/// Recursively overlays `patch` onto `base`; nested objects merge key by
/// key, everything else replaces.
pub fn merge_json(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge_json(slot, v),
                    _ => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, p) => *b = p.clone(),
    }
}

impl EngineConfig {
    /// Applies a partial JSON object on top of this config.
    pub fn overlay(&self, patch: &Map<String, Value>) -> Result<EngineConfig, ConfigError> {
        let mut value = serde_json::to_value(self)?;
        merge_json(&mut value, &Value::Object(patch.clone()));
        let cfg: EngineConfig = serde_json::from_value(value)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn overlay_str(&self, json: &str) -> Result<EngineConfig, ConfigError> {
        match serde_json::from_str::<Value>(json)? {
            Value::Object(map) => self.overlay(&map),
            _ => Err(ConfigError::NotAnObject),
        }
    }

    pub fn overlay_file(&self, path: &Path) -> Result<EngineConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        self.overlay_str(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        let nonneg = |x: f64| x.is_finite() && x >= 0.0;
        if !nonneg(self.appraisal_mood_weight) || !nonneg(self.appraisal_temperament_weight) {
            return bad("appraisal weights must be non-negative".into());
        }
        if !nonneg(self.noise_sigma) {
            return bad(format!("noise_sigma must be >= 0, got {}", self.noise_sigma));
        }
        if !(self.band_boundary > 0.0 && self.band_boundary < 1.0) {
            return bad(format!("band_boundary must lie in (0, 1), got {}", self.band_boundary));
        }
        if self.base_affect.entries().iter().flatten().any(|&x| !(-1.0..=1.0).contains(&x)) {
            return bad("base_affect components must lie in [-1, 1]".into());
        }
        let r = self.decay_rates;
        if ![r.touch, r.social, r.hunger, r.rest_active, r.rest_idle_regen].into_iter().all(nonneg) {
            return bad("decay rates must be non-negative".into());
        }
        let t = self.thresholds;
        if !(unit(t.critical) && t.critical < t.prompt && t.prompt < t.rearm && t.rearm <= 1.0) {
            return bad("thresholds must satisfy 0 <= critical < prompt < rearm <= 1".into());
        }
        if !nonneg(self.idle_after_s) || !nonneg(self.mood_gain) {
            return bad("idle_after_s and mood_gain must be non-negative".into());
        }
        if !unit(self.eta) {
            return bad(format!("eta must lie in [0, 1], got {}", self.eta));
        }
        if !unit(self.mood_range_r) {
            return bad(format!("mood_range_r must lie in [0, 1], got {}", self.mood_range_r));
        }
        if !(self.day_length_s.is_finite() && self.day_length_ms() >= 1) {
            return bad(format!("day_length_s must be at least 1 ms, got {}", self.day_length_s));
        }
        if !(self.time_compression.is_finite() && self.time_compression > 0.0) {
            return bad(format!("time_compression must be positive, got {}", self.time_compression));
        }
        if self.initial_temperament.iter().any(|x| !(-1.0..=1.0).contains(x)) {
            return bad("initial_temperament must lie in [-1, 1]".into());
        }
        if !(0.0 <= self.gaze_eye_deg && self.gaze_eye_deg < self.gaze_away_deg && self.gaze_away_deg <= 180.0) {
            return bad("gaze thresholds must satisfy 0 <= eye < away <= 180".into());
        }
        if !(0.0 <= self.near_m && self.near_m < self.far_m) {
            return bad("proximity thresholds must satisfy 0 <= near < far".into());
        }
        if self.proximity_sustain_ms == 0 {
            return bad("proximity_sustain_ms must be positive".into());
        }
        if self.response_duration_ms == 0 || self.need_duration_ms == 0 || self.passive_duration_ms == 0 {
            return bad("directive durations must be positive".into());
        }
        Ok(())
    }

    pub fn day_length_ms(&self) -> u64 {
        (self.day_length_s * 1000.0).round() as u64
    }

    pub fn idle_after_ms(&self) -> u64 {
        (self.idle_after_s * 1000.0).round() as u64
    }

    pub fn weights(&self) -> AppraisalWeights {
        AppraisalWeights { mood: self.appraisal_mood_weight, temperament: self.appraisal_temperament_weight }
    }

    pub fn stroke_params(&self) -> StrokeParams {
        StrokeParams { window_ms: self.stroke_window_ms, lateral_with_grain: self.lateral_with_grain }
    }

    pub fn gaze_params(&self) -> GazeParams {
        GazeParams { eye_deg: self.gaze_eye_deg, away_deg: self.gaze_away_deg, dwell_ms: self.gaze_dwell_ms }
    }

    pub fn proximity_params(&self) -> ProximityParams {
        ProximityParams { near_m: self.near_m, far_m: self.far_m, sustain_ms: self.proximity_sustain_ms }
    }

    pub fn display_params(&self) -> DisplayParams {
        DisplayParams {
            aura_arousal: self.aura_arousal_threshold,
            sound_arousal: self.sound_arousal_threshold,
            response_ms: self.response_duration_ms,
            need_ms: self.need_duration_ms,
            passive_ms: self.passive_duration_ms,
            hue: self.hue,
            band_boundary: self.band_boundary,
        }
    }

    pub fn lexicon(&self) -> Result<Lexicon, ConfigError> {
        match &self.lexicon_path {
            None => Ok(Lexicon::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.clone(), source })?;
                Ok(Lexicon::parse(&text)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        EngineConfig::default().validate().unwrap();
    }

    #[test]
    fn overlay_is_key_by_key() {
        let cfg = EngineConfig::default()
            .overlay_str(r#"{"eta": 0.1, "base_affect": {"Pat": [0.1, 0.1]}, "decay_rates": {"touch": 0.002}}"#)
            .unwrap();
        assert_eq!(cfg.eta, 0.1);
        assert_eq!(cfg.base_affect.pat, [0.1, 0.1]);
        assert_eq!(cfg.base_affect.stroke_with_grain, [0.6, 0.3]);
        assert_eq!(cfg.decay_rates.touch, 0.002);
        assert_eq!(cfg.decay_rates.social, 0.0008);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(EngineConfig::default().overlay_str(r#"{"etaa": 0.1}"#).is_err());
        assert!(EngineConfig::default().overlay_str(r#"{"base_affect": {"Purr": [0, 0]}}"#).is_err());
        assert!(EngineConfig::default().overlay_str(r#"{"thresholds": {"low": 0.2}}"#).is_err());
        assert!(matches!(EngineConfig::default().overlay_str("[1]"), Err(ConfigError::NotAnObject)));
    }

    #[test]
    fn invalid_values_rejected() {
        for bad in [
            r#"{"noise_sigma": -1}"#,
            r#"{"eta": 1.5}"#,
            r#"{"base_affect": {"Pat": [1.5, 0]}}"#,
            r#"{"thresholds": {"prompt": 0.05}}"#,
            r#"{"near_m": 4.0}"#,
            r#"{"day_length_s": 0}"#,
        ] {
            assert!(matches!(EngineConfig::default().overlay_str(bad), Err(ConfigError::Invalid(_))), "{bad}");
        }
    }

    #[test]
    fn base_table_lookup() {
        let t = BaseAffectTable::default();
        assert_eq!(t.get(EventKind::StrokeWithGrain), VaPoint { valence: 0.6, arousal: 0.3 });
        assert_eq!(t.get(EventKind::WordUnknown), VaPoint { valence: 0.0, arousal: 0.1 });
    }
}
