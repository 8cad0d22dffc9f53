//! Browser bindings for three interactive views: the appraisal explorer,
//! the temperament trajectory and the need meter curves.
//!
//! Structured results cross the boundary as JSON strings.

use affect_core::appraisal::{appraise, AffectEvent, AppraisalWeights, EventKind};
use affect_core::config::BaseAffectTable;
use affect_core::display::{plan_response_display, DisplayParams};
use affect_core::evolution::{archetype_of, end_of_day_update, DayLog};
use affect_core::needs::{decay_tick, DecayRates, Need, NeedsState, RestRegime};
use affect_core::{select_response, AppraisedAffect, VaPoint};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Appraisal {
    valence: f64,
    arousal: f64,
    label: String,
    archetype: String,
    directive: affect_core::DisplayDirective,
}

/// Names of the event kinds the explorer can pick from.
#[wasm_bindgen]
pub fn event_kinds() -> String {
    let names: Vec<String> = EventKind::USER_KINDS.iter().map(|k| k.to_string()).collect();
    serde_json::to_string(&names).unwrap()
}

/// Noise-free appraisal of `kind` in the given context, with the response
/// label, the archetype of that point and the directive it would produce.
#[wasm_bindgen]
pub fn appraise_event(kind: &str, mood_v: f64, mood_a: f64, temp_v: f64, temp_a: f64) -> Result<String, JsError> {
    let kind: EventKind = kind.parse()?;
    let event = AffectEvent { kind, base_affect: BaseAffectTable::default().get(kind), t_ms: 0 };
    // Zero noise draws nothing, so the generator never advances.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let va = appraise(
        &event,
        VaPoint::new(mood_v, mood_a),
        VaPoint::new(temp_v, temp_a),
        AppraisalWeights::default(),
        0.0,
        &mut rng,
    )
    .va;
    let label = select_response(va);
    let out = Appraisal {
        valence: va.valence,
        arousal: va.arousal,
        label: label.to_string(),
        archetype: archetype_of(va).to_string(),
        directive: plan_response_display(label, va, &DisplayParams::default()),
    };
    Ok(serde_json::to_string(&out)?)
}

/// Label at every cell centre of an `n`×`n` grid over [-1, 1]², row-major
/// from high arousal to low.
#[wasm_bindgen]
pub fn label_grid(n: u32) -> String {
    let n = n.max(1);
    let centre = |i: u32| -1.0 + (2.0 * i as f64 + 1.0) / n as f64;
    let cells: Vec<String> = (0..n)
        .flat_map(|row| (0..n).map(move |col| (centre(col), -centre(row))))
        .map(|(v, a)| select_response(VaPoint::new(v, a)).to_string())
        .collect();
    serde_json::to_string(&cells).unwrap()
}

/// Temperament at each day boundary when every day's mean appraisal is
/// `(mean_v, mean_a)`. Returns `[v0, a0, v1, a1, ...]`, `days + 1` points.
#[wasm_bindgen]
pub fn temperament_trajectory(start_v: f64, start_a: f64, mean_v: f64, mean_a: f64, eta: f64, days: u32) -> Vec<f64> {
    let mean = VaPoint::new(mean_v, mean_a);
    let mut log = DayLog::new(0);
    let source = AffectEvent { kind: EventKind::Pat, base_affect: mean, t_ms: 0 };
    log.push(AppraisedAffect { va: mean, source });
    let mut t = VaPoint::new(start_v, start_a);
    let mut out = vec![t.valence, t.arousal];
    for _ in 0..days {
        t = end_of_day_update(t, &log, eta.clamp(0.0, 1.0)).va();
        out.extend([t.valence, t.arousal]);
    }
    out
}

/// Meter levels sampled every `step_s` for `hours` of untouched decay.
/// `idle` selects rest regeneration instead of drain. Returns four series
/// concatenated in touch, rest, social, hunger order.
#[wasm_bindgen]
pub fn need_curves(hours: f64, step_s: f64, idle: bool) -> Vec<f64> {
    let rates = DecayRates::default();
    let regime = if idle { RestRegime::Idle } else { RestRegime::Active };
    let steps = (hours.max(0.0) * 3600.0 / step_s.max(1.0)).floor() as usize;
    let start = NeedsState::default();
    let samples: Vec<NeedsState> =
        (0..=steps).map(|i| decay_tick(&start, i as f64 * step_s.max(1.0), &rates, regime)).collect();
    Need::ALL.iter().flat_map(|&n| samples.iter().map(move |s| s.meter(n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appraisal_in_neutral_context_is_the_base() {
        let out: serde_json::Value = serde_json::from_str(&appraise_event("StrokeWithGrain", 0.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!((out["valence"].as_f64(), out["arousal"].as_f64()), (Some(0.6), Some(0.3)));
        assert_eq!(out["label"], "Happy");
        assert_eq!(out["directive"]["reason"], "Response");
        assert!(out["directive"].get("aura").is_none());
    }

    #[test]
    fn every_listed_kind_appraises() {
        let kinds: Vec<String> = serde_json::from_str(&event_kinds()).unwrap();
        assert_eq!(kinds.len(), 13);
        for k in kinds {
            assert!(appraise_event(&k, 0.5, -0.5, 0.2, 0.2).is_ok());
        }
    }

    #[test]
    fn grid_reads_like_the_circumplex() {
        let cells: Vec<String> = serde_json::from_str(&label_grid(3)).unwrap();
        assert_eq!(cells, ["Angry", "Alert", "Excited", "Upset", "Neutral", "Happy", "Sad", "Sleepy", "Content"]);
    }

    #[test]
    fn trajectory_follows_closed_form() {
        let pts = temperament_trajectory(0.0, 0.0, 0.6, 0.3, 0.05, 60);
        assert_eq!(pts.len(), 122);
        for day in 0..=60 {
            let k = 1.0 - 0.95f64.powi(day);
            assert!((pts[2 * day as usize] - 0.6 * k).abs() < 1e-9);
            assert!((pts[2 * day as usize + 1] - 0.3 * k).abs() < 1e-9);
        }
    }

    #[test]
    fn curves_decay_from_full() {
        let c = need_curves(1.0, 60.0, false);
        assert_eq!(c.len(), 4 * 61);
        // Touch at 0.001/s: 0.4 after ten minutes, empty after the hour.
        assert_eq!(c[60], 0.0);
        assert!((c[10] - 0.4).abs() < 1e-12);
        assert!(c.iter().all(|m| (0.0..=1.0).contains(m)));
        // Hunger at 0.0005/s, rest draining at 0.0005/s while active.
        assert!((c[3 * 61 + 10] - 0.7).abs() < 1e-12);
        assert!((c[61 + 10] - 0.7).abs() < 1e-12);
    }
}
