//! Simulated time, daily moods and slowly evolving temperament.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::affect::{clamp_va, Band, VaPoint, DEFAULT_BAND_BOUNDARY};
use crate::appraisal::AppraisedAffect;

/// Long-term temperament archetypes laid out on the same 3×3 grid as the
/// response labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Archetype {
    Irritable,
    Skittish,
    Excitable,
    Sullen,
    EvenTempered,
    Cheerful,
    Gloomy,
    Placid,
    Relaxed,
}

impl Archetype {
    pub const ALL: [Archetype; 9] = [
        Archetype::Irritable,
        Archetype::Skittish,
        Archetype::Excitable,
        Archetype::Sullen,
        Archetype::EvenTempered,
        Archetype::Cheerful,
        Archetype::Gloomy,
        Archetype::Placid,
        Archetype::Relaxed,
    ];

    pub fn from_bands(valence: Band, arousal: Band) -> Self {
        use Archetype::*;
        use Band::*;
        match (arousal, valence) {
            (High, Low) => Irritable,
            (High, Mid) => Skittish,
            (High, High) => Excitable,
            (Mid, Low) => Sullen,
            (Mid, Mid) => EvenTempered,
            (Mid, High) => Cheerful,
            (Low, Low) => Gloomy,
            (Low, Mid) => Placid,
            (Low, High) => Relaxed,
        }
    }
}

impl fmt::Display for Archetype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn archetype_of(va: VaPoint) -> Archetype {
    archetype_of_with(va, DEFAULT_BAND_BOUNDARY)
}

pub fn archetype_of_with(va: VaPoint, boundary: f64) -> Archetype {
    Archetype::from_bands(Band::of(va.valence, boundary), Band::of(va.arousal, boundary))
}

/// Temperament point with its archetype kept in sync.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Temperament {
    va: VaPoint,
    archetype: Archetype,
}

impl Temperament {
    pub fn new(va: VaPoint) -> Self {
        let va = clamp_va(va.valence, va.arousal);
        Temperament { va, archetype: archetype_of(va) }
    }

    pub fn va(&self) -> VaPoint {
        self.va
    }

    pub fn archetype(&self) -> Archetype {
        self.archetype
    }
}

impl Default for Temperament {
    fn default() -> Self {
        Temperament::new(VaPoint::ORIGIN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mood {
    pub va: VaPoint,
    pub day_index: u64,
}

/// Appraisals accumulated over the current simulated day.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DayLog {
    pub day_index: u64,
    pub appraisals: Vec<AppraisedAffect>,
}

impl DayLog {
    pub fn new(day_index: u64) -> Self {
        DayLog { day_index, appraisals: Vec::new() }
    }

    pub fn push(&mut self, appraised: AppraisedAffect) {
        self.appraisals.push(appraised);
    }

    pub fn mean(&self) -> Option<VaPoint> {
        if self.appraisals.is_empty() {
            return None;
        }
        let n = self.appraisals.len() as f64;
        let (sv, sa) = self
            .appraisals
            .iter()
            .fold((0.0, 0.0), |(v, a), x| (v + x.va.valence, a + x.va.arousal));
        Some(VaPoint { valence: sv / n, arousal: sa / n })
    }

    /// Starts the next day, discarding this day's appraisals.
    pub fn roll_over(&mut self, day_index: u64) {
        self.day_index = day_index;
        self.appraisals.clear();
    }
}

/// Uniform draw from the `±range` box around the temperament, clipped.
/// Always consumes exactly two draws (valence, then arousal).
pub fn sample_daily_mood<R: Rng + ?Sized>(temperament: VaPoint, range: f64, day_index: u64, rng: &mut R) -> Mood {
    let uv: f64 = rng.random();
    let ua: f64 = rng.random();
    let v = temperament.valence - range + 2.0 * range * uv;
    let a = temperament.arousal - range + 2.0 * range * ua;
    Mood { va: clamp_va(v, a), day_index }
}

/// Nudges the mood toward an appraisal by `gain`.
pub fn mood_feedback(mood: VaPoint, appraised: &AppraisedAffect, gain: f64) -> VaPoint {
    clamp_va(mood.valence + gain * appraised.va.valence, mood.arousal + gain * appraised.va.arousal)
}

/// Moves the temperament a fraction `eta` of the way toward the day's mean
/// appraisal. An empty day leaves it unchanged.
pub fn end_of_day_update(temperament: VaPoint, log: &DayLog, eta: f64) -> Temperament {
    match log.mean() {
        None => Temperament::new(temperament),
        Some(mean) => Temperament::new(VaPoint {
            valence: temperament.valence + eta * (mean.valence - temperament.valence),
            arousal: temperament.arousal + eta * (mean.arousal - temperament.arousal),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayBoundary {
    /// Index of the day that begins at `t_ms`.
    pub day_index: u64,
    pub t_ms: u64,
}

/// Monotone simulated clock in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimClock {
    now_ms: u64,
    day_length_ms: u64,
}

impl SimClock {
    pub fn new(day_length_ms: u64) -> Self {
        SimClock::starting_at(0, day_length_ms)
    }

    pub fn starting_at(now_ms: u64, day_length_ms: u64) -> Self {
        assert!(day_length_ms > 0, "day length must be positive");
        SimClock { now_ms, day_length_ms }
    }

    pub fn now_ms(&self) -> u64 {
        self.now_ms
    }

    pub fn day_length_ms(&self) -> u64 {
        self.day_length_ms
    }

    pub fn day_index(&self) -> u64 {
        self.now_ms / self.day_length_ms
    }

    pub fn next_boundary_ms(&self) -> u64 {
        (self.day_index() + 1) * self.day_length_ms
    }

    /// Moves the clock forward, returning every day boundary crossed in order.
    pub fn advance(&mut self, dt_ms: u64) -> Vec<DayBoundary> {
        let start_day = self.day_index();
        self.now_ms += dt_ms;
        (start_day + 1..=self.day_index())
            .map(|day_index| DayBoundary { day_index, t_ms: day_index * self.day_length_ms })
            .collect()
    }
}
