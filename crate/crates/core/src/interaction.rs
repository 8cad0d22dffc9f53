//! Sensor samples to semantic events: directional stroke classification,
//! word categories, gaze bands and proximity zones.
//!
//! Every tracker is a small state machine keyed on the current band or zone
//! rather than on per-sample deltas, so irregular sampling does not produce
//! spurious or duplicate events. Trackers expose a `deadline` (the next
//! simulated instant at which they may fire without new input) and a `poll`
//! that fires anything due at or before a given time.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::appraisal::EventKind;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InteractionError {
    #[error("timestamp {next} ms precedes previous sample at {prev} ms")]
    NonMonotone { prev: u64, next: u64 },
    #[error("unknown touch region {0:?}")]
    UnknownRegion(String),
    #[error("gaze angle {0} outside [0, 180] degrees")]
    AngleOutOfRange(f64),
    #[error("distance {0} m is not a non-negative number")]
    BadDistance(f64),
    #[error("lexicon line {line}: {detail}")]
    Lexicon { line: usize, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Front,
    Back,
    Left,
    Right,
    Top,
}

impl Region {
    pub const ALL: [Region; 5] = [Region::Front, Region::Back, Region::Left, Region::Right, Region::Top];

    pub fn name(self) -> &'static str {
        match self {
            Region::Front => "front",
            Region::Back => "back",
            Region::Left => "left",
            Region::Right => "right",
            Region::Top => "top",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = InteractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Region::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| InteractionError::UnknownRegion(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TouchContact {
    pub region: Region,
    pub t_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrokeParams {
    pub window_ms: u64,
    /// Left↔Right strokes count as with-grain when set, as a pat otherwise.
    pub lateral_with_grain: bool,
}

impl Default for StrokeParams {
    fn default() -> Self {
        StrokeParams { window_ms: 1500, lateral_with_grain: true }
    }
}

/// Classifies the gesture starting at the first contact. Only contacts
/// within `window_ms` of the first one take part; later contacts belong to
/// the next gesture.
pub fn classify_stroke(contacts: &[TouchContact], params: StrokeParams) -> Result<Option<EventKind>, InteractionError> {
    for pair in contacts.windows(2) {
        if pair[1].t_ms < pair[0].t_ms {
            return Err(InteractionError::NonMonotone { prev: pair[0].t_ms, next: pair[1].t_ms });
        }
    }
    let Some(first) = contacts.first() else {
        return Ok(None);
    };
    let regions: Vec<Region> = contacts
        .iter()
        .take_while(|c| c.t_ms - first.t_ms <= params.window_ms)
        .map(|c| c.region)
        .collect();
    Ok(Some(classify_regions(&regions, params.lateral_with_grain)))
}

fn classify_regions(regions: &[Region], lateral_with_grain: bool) -> EventKind {
    use Region::*;
    let (Some(&first), Some(&last)) = (regions.first(), regions.last()) else {
        return EventKind::Pat;
    };
    if regions.len() < 2 {
        return EventKind::Pat;
    }
    let via_top = regions[1..regions.len() - 1].iter().all(|&r| r == Top);
    match (first, last) {
        (Front, Back) if via_top => EventKind::StrokeWithGrain,
        (Back, Front) if via_top => EventKind::StrokeAgainstGrain,
        (Left, Right) | (Right, Left) if regions.len() == 2 && lateral_with_grain => EventKind::StrokeWithGrain,
        _ => EventKind::Pat,
    }
}

/// Streaming wrapper around [`classify_stroke`].
#[derive(Debug, Clone, Default)]
pub struct StrokeTracker {
    params: StrokeParams,
    pending: Vec<TouchContact>,
    last_t: Option<u64>,
}

impl StrokeTracker {
    pub fn new(params: StrokeParams) -> Self {
        StrokeTracker { params, pending: Vec::new(), last_t: None }
    }

    /// First instant at which no further contact can join the pending gesture.
    pub fn deadline(&self) -> Option<u64> {
        self.pending.first().map(|c| c.t_ms + self.params.window_ms + 1)
    }

    /// Closes the pending gesture if its window has elapsed by `now`.
    pub fn poll(&mut self, now: u64) -> Option<(EventKind, u64)> {
        let deadline = self.deadline()?;
        if deadline > now {
            return None;
        }
        let contacts = std::mem::take(&mut self.pending);
        classify_stroke(&contacts, self.params).ok().flatten().map(|k| (k, deadline))
    }

    pub fn push(&mut self, contact: TouchContact) -> Result<Option<(EventKind, u64)>, InteractionError> {
        if let Some(prev) = self.last_t {
            if contact.t_ms < prev {
                return Err(InteractionError::NonMonotone { prev, next: contact.t_ms });
            }
        }
        self.last_t = Some(contact.t_ms);
        let closed = self.poll(contact.t_ms);
        self.pending.push(contact);
        Ok(closed)
    }

    pub fn pending(&self) -> &[TouchContact] {
        &self.pending
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordCategory {
    Greeting,
    Praise,
    Scold,
    Feed,
}

impl WordCategory {
    pub fn event_kind(self) -> EventKind {
        match self {
            WordCategory::Greeting => EventKind::WordGreeting,
            WordCategory::Praise => EventKind::WordPraise,
            WordCategory::Scold => EventKind::WordScold,
            WordCategory::Feed => EventKind::WordFeed,
        }
    }
}

impl FromStr for WordCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "greeting" => Ok(WordCategory::Greeting),
            "praise" => Ok(WordCategory::Praise),
            "scold" => Ok(WordCategory::Scold),
            "feed" => Ok(WordCategory::Feed),
            other => Err(format!("unknown word category {other:?}")),
        }
    }
}

/// Lowercase word → category map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    words: HashMap<String, WordCategory>,
}

const DEFAULT_LEXICON: &str = "\
hello,greeting
hi,greeting
hey,greeting
morning,greeting
goodnight,greeting
good,praise
clever,praise
cute,praise
lovely,praise
well done,praise
bad,scold
no,scold
stop,scold
naughty,scold
food,feed
dinner,feed
eat,feed
treat,feed
feed,feed
";

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::parse(DEFAULT_LEXICON).expect("built-in lexicon parses")
    }
}

impl Lexicon {
    /// Parses `word,category` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, InteractionError> {
        let mut words = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |detail: String| InteractionError::Lexicon { line: i + 1, detail };
            let (word, category) = line.rsplit_once(',').ok_or_else(|| err("expected word,category".into()))?;
            let word = word.trim();
            if word.is_empty() {
                return Err(err("empty word".into()));
            }
            if word != word.to_lowercase() {
                return Err(err(format!("{word:?} is not lowercase")));
            }
            let category = category.trim().parse::<WordCategory>().map_err(err)?;
            words.insert(word.to_string(), category);
        }
        Ok(Lexicon { words })
    }

    pub fn get(&self, word: &str) -> Option<WordCategory> {
        self.words.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Case-insensitive exact lookup; misses map to `WordUnknown`.
pub fn classify_word(word: &str, lexicon: &Lexicon) -> EventKind {
    lexicon
        .get(&word.trim().to_lowercase())
        .map_or(EventKind::WordUnknown, WordCategory::event_kind)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GazeParams {
    pub eye_deg: f64,
    pub away_deg: f64,
    pub dwell_ms: u64,
}

impl Default for GazeParams {
    fn default() -> Self {
        GazeParams { eye_deg: 15.0, away_deg: 90.0, dwell_ms: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GazeBand {
    Eye,
    Neutral,
    Away,
}

/// Emits one `EyeContact`/`LookingAway` per sustained episode in a band.
#[derive(Debug, Clone)]
pub struct GazeTracker {
    params: GazeParams,
    band: Option<GazeBand>,
    since_ms: u64,
    fired: bool,
    last_t: Option<u64>,
}

impl GazeTracker {
    pub fn new(params: GazeParams) -> Self {
        GazeTracker { params, band: None, since_ms: 0, fired: false, last_t: None }
    }

    pub fn deadline(&self) -> Option<u64> {
        match self.band {
            Some(GazeBand::Eye | GazeBand::Away) if !self.fired => Some(self.since_ms + self.params.dwell_ms),
            _ => None,
        }
    }

    pub fn poll(&mut self, now: u64) -> Option<(EventKind, u64)> {
        let deadline = self.deadline().filter(|&d| d <= now)?;
        self.fired = true;
        let kind = match self.band? {
            GazeBand::Eye => EventKind::EyeContact,
            _ => EventKind::LookingAway,
        };
        Some((kind, deadline))
    }

    /// Records a sample; anything due strictly before it fires first.
    pub fn sample(&mut self, angle_deg: f64, t_ms: u64) -> Result<Option<(EventKind, u64)>, InteractionError> {
        if !(0.0..=180.0).contains(&angle_deg) {
            return Err(InteractionError::AngleOutOfRange(angle_deg));
        }
        check_monotone(&mut self.last_t, t_ms)?;
        let fired = self.poll(t_ms);
        let band = if angle_deg < self.params.eye_deg {
            GazeBand::Eye
        } else if angle_deg > self.params.away_deg {
            GazeBand::Away
        } else {
            GazeBand::Neutral
        };
        if self.band != Some(band) {
            self.band = Some(band);
            self.since_ms = t_ms;
            self.fired = false;
        }
        Ok(fired)
    }
}

fn check_monotone(last: &mut Option<u64>, t_ms: u64) -> Result<(), InteractionError> {
    if let Some(prev) = *last {
        if t_ms < prev {
            return Err(InteractionError::NonMonotone { prev, next: t_ms });
        }
    }
    *last = Some(t_ms);
    Ok(())
}

/// Runs a finite gaze trace and returns every emitted event with its time.
pub fn gaze_state(samples: &[(u64, f64)], params: GazeParams) -> Result<Vec<(EventKind, u64)>, InteractionError> {
    let mut tracker = GazeTracker::new(params);
    let mut out = Vec::new();
    for &(t, angle) in samples {
        out.extend(tracker.sample(angle, t)?);
    }
    if let Some(&(t_end, _)) = samples.last() {
        out.extend(tracker.poll(t_end));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProximityParams {
    pub near_m: f64,
    pub far_m: f64,
    pub sustain_ms: u64,
}

impl Default for ProximityParams {
    fn default() -> Self {
        ProximityParams { near_m: 1.0, far_m: 3.0, sustain_ms: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Zone {
    Near,
    Mid,
    Far,
}

/// Zone transitions plus a repeating `SustainedNear` while the user stays close.
#[derive(Debug, Clone)]
pub struct ProximityTracker {
    params: ProximityParams,
    zone: Option<Zone>,
    next_sustain_ms: u64,
    last_t: Option<u64>,
}

impl ProximityTracker {
    pub fn new(params: ProximityParams) -> Self {
        ProximityTracker { params, zone: None, next_sustain_ms: 0, last_t: None }
    }

    pub fn zone(&self) -> Option<Zone> {
        self.zone
    }

    pub fn deadline(&self) -> Option<u64> {
        (self.zone == Some(Zone::Near)).then_some(self.next_sustain_ms)
    }

    pub fn poll(&mut self, now: u64) -> Option<(EventKind, u64)> {
        let due = self.deadline().filter(|&d| d <= now)?;
        self.next_sustain_ms = due + self.params.sustain_ms;
        Some((EventKind::SustainedNear, due))
    }

    /// Records a sample. Returns sustain events due up to `t_ms` followed
    /// by any transition the sample causes.
    pub fn sample(&mut self, distance_m: f64, t_ms: u64) -> Result<Vec<(EventKind, u64)>, InteractionError> {
        if !distance_m.is_finite() || distance_m < 0.0 {
            return Err(InteractionError::BadDistance(distance_m));
        }
        check_monotone(&mut self.last_t, t_ms)?;
        let mut out: Vec<_> = std::iter::from_fn(|| self.poll(t_ms)).collect();
        let zone = if distance_m < self.params.near_m {
            Zone::Near
        } else if distance_m > self.params.far_m {
            Zone::Far
        } else {
            Zone::Mid
        };
        let prev = self.zone.replace(zone);
        if prev != Some(zone) {
            if zone == Zone::Near {
                self.next_sustain_ms = t_ms + self.params.sustain_ms;
            }
            match (prev, zone) {
                (Some(_), Zone::Near) => out.push((EventKind::ApproachNear, t_ms)),
                (Some(_), Zone::Far) => out.push((EventKind::DepartFar, t_ms)),
                _ => {}
            }
        }
        Ok(out)
    }
}

/// Runs a finite proximity trace and returns every emitted event.
pub fn proximity_state(samples: &[(u64, f64)], params: ProximityParams) -> Result<Vec<(EventKind, u64)>, InteractionError> {
    let mut tracker = ProximityTracker::new(params);
    let mut out = Vec::new();
    for &(t, d) in samples {
        out.extend(tracker.sample(d, t)?);
    }
    if let Some(&(t_end, _)) = samples.last() {
        out.extend(std::iter::from_fn(|| tracker.poll(t_end)));
    }
    Ok(out)
}
