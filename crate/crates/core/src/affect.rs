//! Circumplex representation: valence/arousal points, banding and the
//! 3×3 response grid.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Half-width of the middle band on each axis.
pub const DEFAULT_BAND_BOUNDARY: f64 = 1.0 / 3.0;

/// A point on the valence (pleasant/unpleasant) × arousal (activated/calm)
/// plane. Every engine operation returns points inside `[-1, 1]²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VaPoint {
    pub valence: f64,
    pub arousal: f64,
}

impl VaPoint {
    pub const ORIGIN: VaPoint = VaPoint { valence: 0.0, arousal: 0.0 };

    /// Builds a point from a raw pair, clipping both components.
    pub fn new(valence: f64, arousal: f64) -> Self {
        clamp_va(valence, arousal)
    }

    pub fn in_bounds(&self) -> bool {
        (-1.0..=1.0).contains(&self.valence) && (-1.0..=1.0).contains(&self.arousal)
    }
}

impl From<[f64; 2]> for VaPoint {
    fn from([valence, arousal]: [f64; 2]) -> Self {
        VaPoint::new(valence, arousal)
    }
}

/// Clips each component to `[-1, 1]`. NaN collapses to 0.
pub fn clamp_va(valence: f64, arousal: f64) -> VaPoint {
    VaPoint { valence: clamp_unit(valence), arousal: clamp_unit(arousal) }
}

fn clamp_unit(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-1.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Band {
    Low,
    Mid,
    High,
}

impl Band {
    /// `Mid` is the closed interval `[-boundary, boundary]`.
    pub fn of(x: f64, boundary: f64) -> Band {
        if x < -boundary {
            Band::Low
        } else if x > boundary {
            Band::High
        } else {
            Band::Mid
        }
    }
}

/// Short-term emotional response labels, one per grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EmotionLabel {
    Angry,
    Alert,
    Excited,
    Upset,
    Neutral,
    Happy,
    Sad,
    Sleepy,
    Content,
}

impl EmotionLabel {
    pub const ALL: [EmotionLabel; 9] = [
        EmotionLabel::Angry,
        EmotionLabel::Alert,
        EmotionLabel::Excited,
        EmotionLabel::Upset,
        EmotionLabel::Neutral,
        EmotionLabel::Happy,
        EmotionLabel::Sad,
        EmotionLabel::Sleepy,
        EmotionLabel::Content,
    ];

    /// Grid lookup keyed by (valence band, arousal band).
    pub fn from_bands(valence: Band, arousal: Band) -> Self {
        use Band::*;
        use EmotionLabel::*;
        match (arousal, valence) {
            (High, Low) => Angry,
            (High, Mid) => Alert,
            (High, High) => Excited,
            (Mid, Low) => Upset,
            (Mid, Mid) => Neutral,
            (Mid, High) => Happy,
            (Low, Low) => Sad,
            (Low, Mid) => Sleepy,
            (Low, High) => Content,
        }
    }

    /// The (valence band, arousal band) cell this label occupies.
    pub fn region(self) -> (Band, Band) {
        use Band::*;
        use EmotionLabel::*;
        match self {
            Angry => (Low, High),
            Alert => (Mid, High),
            Excited => (High, High),
            Upset => (Low, Mid),
            Neutral => (Mid, Mid),
            Happy => (High, Mid),
            Sad => (Low, Low),
            Sleepy => (Mid, Low),
            Content => (High, Low),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EmotionLabel::Angry => "Angry",
            EmotionLabel::Alert => "Alert",
            EmotionLabel::Excited => "Excited",
            EmotionLabel::Upset => "Upset",
            EmotionLabel::Neutral => "Neutral",
            EmotionLabel::Happy => "Happy",
            EmotionLabel::Sad => "Sad",
            EmotionLabel::Sleepy => "Sleepy",
            EmotionLabel::Content => "Content",
        }
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Picks the response label for an appraised point using the default bands.
pub fn select_response(va: VaPoint) -> EmotionLabel {
    select_response_with(va, DEFAULT_BAND_BOUNDARY)
}

pub fn select_response_with(va: VaPoint, boundary: f64) -> EmotionLabel {
    EmotionLabel::from_bands(Band::of(va.valence, boundary), Band::of(va.arousal, boundary))
}
