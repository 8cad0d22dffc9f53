//! Internal need meters: decay, replenishment from events and
//! threshold-triggered prompts with hysteresis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::appraisal::EventKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Need {
    Touch,
    Rest,
    Social,
    Hunger,
}

impl Need {
    pub const ALL: [Need; 4] = [Need::Touch, Need::Rest, Need::Social, Need::Hunger];

    pub fn name(self) -> &'static str {
        match self {
            Need::Touch => "Touch",
            Need::Rest => "Rest",
            Need::Social => "Social",
            Need::Hunger => "Hunger",
        }
    }
}

impl fmt::Display for Need {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Need {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Need::ALL.into_iter().find(|n| n.name() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Severity {
    Low,
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NeedPrompt {
    pub need: Need,
    pub severity: Severity,
}

/// Per-severity prompt flags for one meter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Armed {
    pub low: bool,
    pub critical: bool,
}

impl Default for Armed {
    fn default() -> Self {
        Armed { low: true, critical: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerNeed<T> {
    pub touch: T,
    pub rest: T,
    pub social: T,
    pub hunger: T,
}

impl<T> PerNeed<T> {
    pub fn get(&self, need: Need) -> &T {
        match need {
            Need::Touch => &self.touch,
            Need::Rest => &self.rest,
            Need::Social => &self.social,
            Need::Hunger => &self.hunger,
        }
    }

    pub fn get_mut(&mut self, need: Need) -> &mut T {
        match need {
            Need::Touch => &mut self.touch,
            Need::Rest => &mut self.rest,
            Need::Social => &mut self.social,
            Need::Hunger => &mut self.hunger,
        }
    }
}

/// Four meters in `[0, 1]`; 1 is fully satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeedsState {
    pub touch: f64,
    pub rest: f64,
    pub social: f64,
    pub hunger: f64,
    pub armed: PerNeed<Armed>,
}

impl Default for NeedsState {
    fn default() -> Self {
        NeedsState { touch: 1.0, rest: 1.0, social: 1.0, hunger: 1.0, armed: PerNeed::default() }
    }
}

impl NeedsState {
    pub fn meter(&self, need: Need) -> f64 {
        match need {
            Need::Touch => self.touch,
            Need::Rest => self.rest,
            Need::Social => self.social,
            Need::Hunger => self.hunger,
        }
    }

    fn meter_mut(&mut self, need: Need) -> &mut f64 {
        match need {
            Need::Touch => &mut self.touch,
            Need::Rest => &mut self.rest,
            Need::Social => &mut self.social,
            Need::Hunger => &mut self.hunger,
        }
    }

    pub fn in_bounds(&self) -> bool {
        Need::ALL.iter().all(|&n| (0.0..=1.0).contains(&self.meter(n)))
    }

    fn rearm(&mut self, thresholds: &Thresholds) {
        for need in Need::ALL {
            if self.meter(need) > thresholds.rearm {
                *self.armed.get_mut(need) = Armed::default();
            }
        }
    }

    /// Milliseconds until `need` reaches `threshold` from above under the
    /// current regime, rounded up. `None` when the meter is not falling or
    /// is already at or below the threshold.
    pub fn ms_until_at_or_below(&self, need: Need, threshold: f64, rates: &DecayRates, regime: RestRegime) -> Option<u64> {
        let value = self.meter(need);
        let slope = rates.slope(need, regime);
        if value <= threshold || slope >= 0.0 {
            return None;
        }
        let mut ms = ((value - threshold) / -slope * 1000.0).ceil().max(1.0) as u64;
        // Guard against rounding leaving the meter a hair above the threshold.
        while decay_tick(self, ms as f64 / 1000.0, rates, regime).meter(need) > threshold {
            ms += 1;
        }
        Some(ms)
    }
}

/// Whether the rest meter is being drained by ongoing interaction or
/// regenerating during inactivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RestRegime {
    Active,
    Idle,
}

/// Per-second meter changes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayRates {
    pub touch: f64,
    pub social: f64,
    pub hunger: f64,
    /// Drain while interactions are occurring.
    pub rest_active: f64,
    /// Regeneration while idle.
    pub rest_idle_regen: f64,
}

impl Default for DecayRates {
    fn default() -> Self {
        DecayRates { touch: 0.0010, social: 0.0008, hunger: 0.0005, rest_active: 0.0005, rest_idle_regen: 0.01 }
    }
}

impl DecayRates {
    /// Signed per-second change of a meter.
    pub fn slope(&self, need: Need, regime: RestRegime) -> f64 {
        match need {
            Need::Touch => -self.touch,
            Need::Social => -self.social,
            Need::Hunger => -self.hunger,
            Need::Rest => match regime {
                RestRegime::Active => -self.rest_active,
                RestRegime::Idle => self.rest_idle_regen,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub prompt: f64,
    pub critical: f64,
    pub rearm: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { prompt: 0.3, critical: 0.1, rearm: 0.5 }
    }
}

/// Meter increments granted by an event.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NeedDelta {
    pub touch: f64,
    pub rest: f64,
    pub social: f64,
    pub hunger: f64,
}

impl NeedDelta {
    const fn new(touch: f64, social: f64, hunger: f64) -> Self {
        NeedDelta { touch, rest: 0.0, social, hunger }
    }
}

/// Replenishment granted by each user event kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReplenishTable {
    #[serde(rename = "StrokeWithGrain")]
    pub stroke_with_grain: NeedDelta,
    #[serde(rename = "StrokeAgainstGrain")]
    pub stroke_against_grain: NeedDelta,
    #[serde(rename = "Pat")]
    pub pat: NeedDelta,
    #[serde(rename = "WordGreeting")]
    pub word_greeting: NeedDelta,
    #[serde(rename = "WordPraise")]
    pub word_praise: NeedDelta,
    #[serde(rename = "WordScold")]
    pub word_scold: NeedDelta,
    #[serde(rename = "WordFeed")]
    pub word_feed: NeedDelta,
    #[serde(rename = "WordUnknown")]
    pub word_unknown: NeedDelta,
    #[serde(rename = "EyeContact")]
    pub eye_contact: NeedDelta,
    #[serde(rename = "LookingAway")]
    pub looking_away: NeedDelta,
    #[serde(rename = "ApproachNear")]
    pub approach_near: NeedDelta,
    #[serde(rename = "DepartFar")]
    pub depart_far: NeedDelta,
    #[serde(rename = "SustainedNear")]
    pub sustained_near: NeedDelta,
}

impl Default for ReplenishTable {
    fn default() -> Self {
        let stroke = NeedDelta::new(0.15, 0.05, 0.0);
        let word = NeedDelta::new(0.0, 0.05, 0.0);
        ReplenishTable {
            stroke_with_grain: stroke,
            stroke_against_grain: NeedDelta::new(0.05, 0.0, 0.0),
            pat: stroke,
            word_greeting: word,
            word_praise: word,
            word_scold: word,
            word_feed: NeedDelta::new(0.0, 0.05, 0.5),
            word_unknown: NeedDelta::default(),
            eye_contact: NeedDelta::default(),
            looking_away: NeedDelta::default(),
            approach_near: NeedDelta::default(),
            depart_far: NeedDelta::default(),
            sustained_near: NeedDelta::new(0.0, 0.02, 0.0),
        }
    }
}

impl ReplenishTable {
    pub fn delta(&self, kind: EventKind) -> NeedDelta {
        match kind {
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
            EventKind::NeedPrompt(_) => NeedDelta::default(),
        }
    }
}

fn unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Advances every meter by `dt_s` simulated seconds. Meters floor at 0;
/// rest regenerates (capped at 1) while idle and may re-arm its prompts.
pub fn decay_tick(state: &NeedsState, dt_s: f64, rates: &DecayRates, regime: RestRegime) -> NeedsState {
    let mut next = *state;
    if dt_s <= 0.0 {
        return next;
    }
    for need in Need::ALL {
        let m = next.meter_mut(need);
        *m = unit(*m + rates.slope(need, regime) * dt_s);
    }
    next
}

/// Like [`decay_tick`] but also re-arms meters lifted above the re-arm
/// level by idle regeneration.
pub fn decay_tick_rearming(state: &NeedsState, dt_s: f64, rates: &DecayRates, regime: RestRegime, thresholds: &Thresholds) -> NeedsState {
    let mut next = decay_tick(state, dt_s, rates, regime);
    if regime == RestRegime::Idle {
        next.rearm(thresholds);
    }
    next
}

pub fn apply_event_to_needs(state: &NeedsState, kind: EventKind, table: &ReplenishTable, thresholds: &Thresholds) -> NeedsState {
    let d = table.delta(kind);
    let mut next = *state;
    next.touch = unit(next.touch + d.touch);
    next.rest = unit(next.rest + d.rest);
    next.social = unit(next.social + d.social);
    next.hunger = unit(next.hunger + d.hunger);
    next.rearm(thresholds);
    next
}

/// Emits a prompt for every armed downward crossing between `prev` and
/// `next`, disarming the corresponding flag in `next`.
pub fn check_thresholds(prev: &NeedsState, next: &mut NeedsState, thresholds: &Thresholds) -> Vec<NeedPrompt> {
    let mut prompts = Vec::new();
    for need in Need::ALL {
        let (before, after) = (prev.meter(need), next.meter(need));
        let armed = next.armed.get_mut(need);
        if armed.low && before > thresholds.prompt && after <= thresholds.prompt {
            armed.low = false;
            prompts.push(NeedPrompt { need, severity: Severity::Low });
        }
        if armed.critical && before > thresholds.critical && after <= thresholds.critical {
            armed.critical = false;
            prompts.push(NeedPrompt { need, severity: Severity::Critical });
        }
    }
    prompts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn with_touch(touch: f64) -> NeedsState {
        NeedsState { touch, ..NeedsState::default() }
    }

    fn only_touch(rate: f64) -> DecayRates {
        DecayRates { touch: rate, social: 0.0, hunger: 0.0, rest_active: 0.0, rest_idle_regen: 0.0 }
    }

    #[test]
    fn decay_examples() {
        let r = only_touch(0.001);
        assert!((decay_tick(&with_touch(1.0), 100.0, &r, RestRegime::Active).touch - 0.9).abs() < 1e-12);
        assert_eq!(decay_tick(&with_touch(0.05), 100.0, &r, RestRegime::Active).touch, 0.0);
        let s = NeedsState { touch: 0.4, rest: 0.3, social: 0.2, hunger: 0.1, ..Default::default() };
        assert_eq!(decay_tick(&s, 0.0, &DecayRates::default(), RestRegime::Active), s);
    }

    #[test]
    fn rest_regenerates_when_idle() {
        let s = NeedsState { rest: 0.2, ..Default::default() };
        let idle = decay_tick(&s, 10.0, &DecayRates::default(), RestRegime::Idle);
        assert!((idle.rest - 0.3).abs() < 1e-12);
        let active = decay_tick(&s, 10.0, &DecayRates::default(), RestRegime::Active);
        assert!((active.rest - 0.195).abs() < 1e-12);
    }

    #[test]
    fn replenish_examples() {
        let th = Thresholds::default();
        let table = ReplenishTable::default();
        let s = NeedsState { touch: 0.5, social: 0.5, ..Default::default() };
        let out = apply_event_to_needs(&s, EventKind::StrokeWithGrain, &table, &th);
        assert!((out.touch - 0.65).abs() < 1e-12);
        assert!((out.social - 0.55).abs() < 1e-12);

        let s = NeedsState { hunger: 0.2, ..Default::default() };
        let out = apply_event_to_needs(&s, EventKind::WordFeed, &table, &th);
        assert!((out.hunger - 0.7).abs() < 1e-12);

        let s = NeedsState { touch: 0.3, rest: 0.4, social: 0.5, hunger: 0.6, ..Default::default() };
        assert_eq!(apply_event_to_needs(&s, EventKind::LookingAway, &table, &th), s);
    }

    #[test]
    fn threshold_examples() {
        let th = Thresholds::default();
        let mut next = with_touch(0.29);
        let p = check_thresholds(&with_touch(0.31), &mut next, &th);
        assert_eq!(p, vec![NeedPrompt { need: Need::Touch, severity: Severity::Low }]);
        assert!(!next.armed.touch.low);

        let mut after = NeedsState { touch: 0.25, ..next };
        assert!(check_thresholds(&next, &mut after, &th).is_empty());

        let mut prev = with_touch(0.12);
        prev.armed.touch.low = false;
        let mut next = NeedsState { touch: 0.09, ..prev };
        let p = check_thresholds(&prev, &mut next, &th);
        assert_eq!(p, vec![NeedPrompt { need: Need::Touch, severity: Severity::Critical }]);
    }

    #[test]
    fn single_drop_through_both_levels_emits_both() {
        let th = Thresholds::default();
        let mut next = with_touch(0.05);
        let p = check_thresholds(&with_touch(0.31), &mut next, &th);
        assert_eq!(p.len(), 2);
        assert_eq!(p[1].severity, Severity::Critical);
    }

    #[test]
    fn rearm_requires_rising_above_half() {
        let th = Thresholds::default();
        let table = ReplenishTable::default();
        let mut s = with_touch(0.2);
        s.armed.touch = Armed { low: false, critical: true };
        let s = apply_event_to_needs(&s, EventKind::StrokeWithGrain, &table, &th);
        assert!(!s.armed.touch.low, "0.35 is below the re-arm level");
        let s = apply_event_to_needs(&s, EventKind::StrokeWithGrain, &table, &th);
        let s = apply_event_to_needs(&s, EventKind::StrokeWithGrain, &table, &th);
        assert!(s.touch > 0.5 && s.armed.touch.low);
    }

    #[test]
    fn crossing_time_lands_on_threshold() {
        let s = with_touch(1.0);
        let rates = DecayRates::default();
        let ms = s.ms_until_at_or_below(Need::Touch, 0.3, &rates, RestRegime::Idle).unwrap();
        assert_eq!(ms, 700_000);
        assert!(decay_tick(&s, ms as f64 / 1000.0, &rates, RestRegime::Idle).touch <= 0.3);
        assert!(decay_tick(&s, (ms - 1) as f64 / 1000.0, &rates, RestRegime::Idle).touch > 0.3);
        assert_eq!(s.ms_until_at_or_below(Need::Rest, 0.3, &rates, RestRegime::Idle), None);
    }

    proptest! {
        #[test]
        fn decay_is_additive(
            touch in 0.0f64..=1.0, rest in 0.0f64..=1.0,
            a in 0.0f64..5000.0, b in 0.0f64..5000.0,
            idle in any::<bool>(),
        ) {
            let regime = if idle { RestRegime::Idle } else { RestRegime::Active };
            let s = NeedsState { touch, rest, ..Default::default() };
            let r = DecayRates::default();
            let two = decay_tick(&decay_tick(&s, a, &r, regime), b, &r, regime);
            let one = decay_tick(&s, a + b, &r, regime);
            for n in Need::ALL {
                prop_assert!((two.meter(n) - one.meter(n)).abs() < 1e-9);
            }
        }

        #[test]
        fn meters_stay_in_unit_interval(steps in proptest::collection::vec((0usize..14, 0.0f64..3600.0, any::<bool>()), 0..60)) {
            let th = Thresholds::default();
            let table = ReplenishTable::default();
            let rates = DecayRates::default();
            let mut s = NeedsState::default();
            for (k, dt, idle) in steps {
                let regime = if idle { RestRegime::Idle } else { RestRegime::Active };
                let prev = s;
                s = decay_tick_rearming(&s, dt, &rates, regime, &th);
                check_thresholds(&prev, &mut s, &th);
                if let Some(&kind) = EventKind::USER_KINDS.get(k) {
                    s = apply_event_to_needs(&s, kind, &table, &th);
                }
                prop_assert!(s.in_bounds());
            }
        }

        #[test]
        fn without_events_meters_do_not_rise(s0 in 0.0f64..=1.0, dts in proptest::collection::vec(0.0f64..600.0, 1..30)) {
            let rates = DecayRates::default();
            let mut s = NeedsState { touch: s0, rest: s0, social: s0, hunger: s0, ..Default::default() };
            for dt in dts {
                let next = decay_tick(&s, dt, &rates, RestRegime::Active);
                for n in Need::ALL {
                    prop_assert!(next.meter(n) <= s.meter(n));
                }
                let idle = decay_tick(&s, dt, &rates, RestRegime::Idle);
                prop_assert!(idle.rest >= s.rest);
                s = next;
            }
        }
    }
}
