//! Event appraisal: turns a classified interaction into a valence/arousal
//! point given the current mood and temperament, then perturbs it.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::affect::{clamp_va, VaPoint};
use crate::needs::Need;

/// Semantic class of an interaction, or an internal need prompt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    StrokeWithGrain,
    StrokeAgainstGrain,
    Pat,
    WordGreeting,
    WordPraise,
    WordScold,
    WordFeed,
    WordUnknown,
    EyeContact,
    LookingAway,
    ApproachNear,
    DepartFar,
    SustainedNear,
    NeedPrompt(Need),
}

impl EventKind {
    /// Every kind that can originate from the user (everything but prompts).
    pub const USER_KINDS: [EventKind; 13] = [
        EventKind::StrokeWithGrain,
        EventKind::StrokeAgainstGrain,
        EventKind::Pat,
        EventKind::WordGreeting,
        EventKind::WordPraise,
        EventKind::WordScold,
        EventKind::WordFeed,
        EventKind::WordUnknown,
        EventKind::EyeContact,
        EventKind::LookingAway,
        EventKind::ApproachNear,
        EventKind::DepartFar,
        EventKind::SustainedNear,
    ];

    pub fn is_user(self) -> bool {
        !matches!(self, EventKind::NeedPrompt(_))
    }

    pub fn is_word(self) -> bool {
        matches!(
            self,
            EventKind::WordGreeting
                | EventKind::WordPraise
                | EventKind::WordScold
                | EventKind::WordFeed
                | EventKind::WordUnknown
        )
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EventKind::StrokeWithGrain => "StrokeWithGrain",
            EventKind::StrokeAgainstGrain => "StrokeAgainstGrain",
            EventKind::Pat => "Pat",
            EventKind::WordGreeting => "WordGreeting",
            EventKind::WordPraise => "WordPraise",
            EventKind::WordScold => "WordScold",
            EventKind::WordFeed => "WordFeed",
            EventKind::WordUnknown => "WordUnknown",
            EventKind::EyeContact => "EyeContact",
            EventKind::LookingAway => "LookingAway",
            EventKind::ApproachNear => "ApproachNear",
            EventKind::DepartFar => "DepartFar",
            EventKind::SustainedNear => "SustainedNear",
            EventKind::NeedPrompt(need) => return write!(f, "NeedPrompt({need})"),
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown event kind {0:?}")]
pub struct UnknownEventKind(pub String);

impl FromStr for EventKind {
    type Err = UnknownEventKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(inner) = s.strip_prefix("NeedPrompt(").and_then(|r| r.strip_suffix(')')) {
            return inner
                .parse::<Need>()
                .map(EventKind::NeedPrompt)
                .map_err(|_| UnknownEventKind(s.to_string()));
        }
        EventKind::USER_KINDS
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| UnknownEventKind(s.to_string()))
    }
}

impl Serialize for EventKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EventKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A classified interaction with its intrinsic appraisal seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffectEvent {
    pub kind: EventKind,
    pub base_affect: VaPoint,
    pub t_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppraisedAffect {
    pub va: VaPoint,
    pub source: AffectEvent,
}

/// Contribution of the current mood and temperament to an appraisal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppraisalWeights {
    pub mood: f64,
    pub temperament: f64,
}

impl Default for AppraisalWeights {
    fn default() -> Self {
        AppraisalWeights { mood: 0.25, temperament: 0.15 }
    }
}

/// `clamp(base + w_m·mood + w_t·temperament + noise)` per component.
///
/// Noise is drawn only when `noise_sigma > 0`, so a zero sigma consumes no
/// randomness and the result is an affine function of the inputs.
pub fn appraise<R: Rng + ?Sized>(
    event: &AffectEvent,
    mood: VaPoint,
    temperament: VaPoint,
    weights: AppraisalWeights,
    noise_sigma: f64,
    rng: &mut R,
) -> AppraisedAffect {
    let base = event.base_affect;
    let valence = base.valence + weights.mood * mood.valence + weights.temperament * temperament.valence;
    let arousal = base.arousal + weights.mood * mood.arousal + weights.temperament * temperament.arousal;
    let va = add_noise_raw(valence, arousal, noise_sigma, rng);
    AppraisedAffect { va, source: *event }
}

/// Adds independent zero-mean Gaussian noise to each component, then clips.
pub fn add_noise<R: Rng + ?Sized>(p: VaPoint, sigma: f64, rng: &mut R) -> VaPoint {
    add_noise_raw(p.valence, p.arousal, sigma, rng)
}

fn add_noise_raw<R: Rng + ?Sized>(valence: f64, arousal: f64, sigma: f64, rng: &mut R) -> VaPoint {
    if sigma <= 0.0 {
        return clamp_va(valence, arousal);
    }
    let dv: f64 = StandardNormal.sample(rng);
    let da: f64 = StandardNormal.sample(rng);
    clamp_va(valence + sigma * dv, arousal + sigma * da)
}
