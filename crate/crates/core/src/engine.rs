//! The full affect loop driven by simulated time.
//!
//! The engine is a discrete-event simulation. Between inputs it jumps from
//! one internal deadline to the next (need threshold crossings, rest regime
//! switches, gesture windows closing, gaze dwell, proximity sustain,
//! directive expiry, day boundaries). Meters are linear between deadlines
//! and are only re-anchored at deadlines or inputs, so the output does not
//! depend on how often `advance_to` is called.
//!
//! Random draws come from one seeded ChaCha8 generator, in processing order:
//! two draws for the opening mood, then for each appraisal two noise draws
//! (when sigma > 0), and two mood draws at every day boundary.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affect::{select_response_with, VaPoint};
use crate::appraisal::{appraise, AffectEvent, AppraisalWeights, EventKind};
use crate::config::{ConfigError, EngineConfig};
use crate::display::{plan_need_display, plan_response_display, DirectiveQueue, DisplayDirective, DisplayParams};
use crate::evolution::{end_of_day_update, mood_feedback, sample_daily_mood, Archetype, DayLog, Mood, SimClock, Temperament};
use crate::interaction::{
    classify_word, GazeTracker, InteractionError, Lexicon, ProximityTracker, Region, StrokeTracker, TouchContact,
};
use crate::log::{
    AppraisalBody, DayBoundaryBody, EventBody, LogRecord, MoodBody, NeedsBody, RecordBody, ResponseBody, TemperamentBody,
};
use crate::needs::{apply_event_to_needs, check_thresholds, decay_tick_rearming, Need, NeedPrompt, NeedsState, RestRegime};

/// A raw sensor reading or recognised word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "channel", content = "payload", rename_all = "lowercase")]
pub enum Sample {
    Touch { region: Region },
    Word { text: String },
    Gaze { angle_deg: f64 },
    Proximity { distance_m: f64 },
}

impl Sample {
    /// Checks the payload without touching any engine state.
    pub fn validate(&self) -> Result<(), InteractionError> {
        match *self {
            Sample::Gaze { angle_deg } if !(0.0..=180.0).contains(&angle_deg) => {
                Err(InteractionError::AngleOutOfRange(angle_deg))
            }
            Sample::Proximity { distance_m } if !(distance_m.is_finite() && distance_m >= 0.0) => {
                Err(InteractionError::BadDistance(distance_m))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("input at {t_ms} ms is earlier than the engine clock ({now_ms} ms)")]
    InThePast { t_ms: u64, now_ms: u64 },
    #[error(transparent)]
    Input(#[from] InteractionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperamentView {
    pub valence: f64,
    pub arousal: f64,
    pub archetype: Archetype,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockView {
    pub t_ms: u64,
    pub day_index: u64,
}

/// Consistent view of the engine between inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub mood: VaPoint,
    pub temperament: TemperamentView,
    pub needs: NeedsBody,
    pub clock: ClockView,
}

/// What survives a restart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistedState {
    pub temperament: VaPoint,
    pub needs: NeedsState,
    pub day_index: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Deadline {
    DirectiveEnd,
    Stroke,
    Gaze,
    Proximity,
    RestRegime,
    NeedCrossing,
    DayBoundary,
}

pub struct Engine {
    cfg: EngineConfig,
    weights: AppraisalWeights,
    display: DisplayParams,
    lexicon: Lexicon,
    rng: ChaCha8Rng,
    clock: SimClock,
    /// Start of the next day not yet processed. Tracked separately from the
    /// clock so a boundary shared with another deadline is never skipped.
    boundary_due: u64,
    needs: NeedsState,
    needs_t: u64,
    last_interaction: Option<u64>,
    mood: Mood,
    temperament: Temperament,
    day_log: DayLog,
    stroke: StrokeTracker,
    gaze: GazeTracker,
    proximity: ProximityTracker,
    queue: DirectiveQueue,
    next_event_id: u64,
    started: bool,
}

impl Engine {
    pub fn new(cfg: EngineConfig, seed: u64) -> Result<Engine, ConfigError> {
        let temperament = VaPoint::from(cfg.initial_temperament);
        Engine::build(cfg, seed, temperament, NeedsState::default(), 0)
    }

    /// Resumes from a persisted snapshot at the start of its day.
    pub fn restore(cfg: EngineConfig, seed: u64, state: &PersistedState) -> Result<Engine, ConfigError> {
        let mut needs = state.needs;
        for m in [&mut needs.touch, &mut needs.rest, &mut needs.social, &mut needs.hunger] {
            *m = m.clamp(0.0, 1.0);
        }
        Engine::build(cfg, seed, state.temperament, needs, state.day_index)
    }

    fn build(cfg: EngineConfig, seed: u64, temperament: VaPoint, needs: NeedsState, day_index: u64) -> Result<Engine, ConfigError> {
        cfg.validate()?;
        let lexicon = cfg.lexicon()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let temperament = Temperament::new(temperament);
        let mood = sample_daily_mood(temperament.va(), cfg.mood_range_r, day_index, &mut rng);
        let day_length = cfg.day_length_ms();
        let start = day_index * day_length;
        Ok(Engine {
            weights: cfg.weights(),
            display: cfg.display_params(),
            stroke: StrokeTracker::new(cfg.stroke_params()),
            gaze: GazeTracker::new(cfg.gaze_params()),
            proximity: ProximityTracker::new(cfg.proximity_params()),
            lexicon,
            rng,
            clock: SimClock::starting_at(start, day_length),
            boundary_due: start + day_length,
            needs,
            needs_t: start,
            last_interaction: None,
            mood,
            temperament,
            day_log: DayLog::new(day_index),
            queue: DirectiveQueue::new(),
            next_event_id: 0,
            started: false,
            cfg,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn now_ms(&self) -> u64 {
        self.clock.now_ms()
    }

    pub fn mood(&self) -> VaPoint {
        self.mood.va
    }

    pub fn temperament(&self) -> Temperament {
        self.temperament
    }

    pub fn active_directive(&self) -> Option<&DisplayDirective> {
        self.queue.active()
    }

    /// Needs as of the current clock.
    pub fn needs(&self) -> NeedsState {
        self.needs_at(self.clock.now_ms())
    }

    pub fn snapshot(&self) -> Snapshot {
        let t = self.temperament;
        Snapshot {
            mood: self.mood.va,
            temperament: TemperamentView { valence: t.va().valence, arousal: t.va().arousal, archetype: t.archetype() },
            needs: NeedsBody::from(&self.needs()),
            clock: ClockView { t_ms: self.clock.now_ms(), day_index: self.clock.day_index() },
        }
    }

    pub fn persisted(&self) -> PersistedState {
        PersistedState { temperament: self.temperament.va(), needs: self.needs(), day_index: self.clock.day_index() }
    }

    /// Emits the opening records: temperament (with the first mood), needs
    /// and the passive face. Later calls do nothing.
    pub fn start(&mut self, out: &mut Vec<LogRecord>) {
        if self.started {
            return;
        }
        self.started = true;
        let t = self.clock.now_ms();
        let temp = self.temperament.va();
        out.push(LogRecord {
            t_ms: t,
            body: RecordBody::Temperament(TemperamentBody {
                valence: temp.valence,
                arousal: temp.arousal,
                archetype: self.temperament.archetype(),
                initial_mood: Some(self.mood.va),
            }),
        });
        out.push(LogRecord { t_ms: t, body: RecordBody::Needs(NeedsBody::from(&self.needs)) });
        if let Some(d) = self.queue.refresh_passive(t, self.mood.va, &self.display) {
            out.push(LogRecord { t_ms: t, body: RecordBody::Directive(d) });
        }
    }

    fn regime_at(&self, t: u64) -> RestRegime {
        match self.last_interaction {
            Some(last) if t < last + self.cfg.idle_after_ms() => RestRegime::Active,
            _ => RestRegime::Idle,
        }
    }

    fn needs_at(&self, t: u64) -> NeedsState {
        let dt = t.saturating_sub(self.needs_t) as f64 / 1000.0;
        decay_tick_rearming(&self.needs, dt, &self.cfg.decay_rates, self.regime_at(self.needs_t), &self.cfg.thresholds)
    }

    fn next_deadline(&self) -> Option<(u64, Deadline)> {
        let regime = self.regime_at(self.needs_t);
        let crossing = Need::ALL
            .iter()
            .flat_map(|&need| {
                let armed = self.needs.armed.get(need);
                let th = &self.cfg.thresholds;
                [(armed.low, th.prompt), (armed.critical, th.critical)]
                    .into_iter()
                    .filter(|(on, _)| *on)
                    .filter_map(move |(_, level)| self.needs.ms_until_at_or_below(need, level, &self.cfg.decay_rates, regime))
            })
            .min()
            .map(|ms| self.needs_t + ms);
        let rest_switch = match (regime, self.last_interaction) {
            (RestRegime::Active, Some(last)) => Some(last + self.cfg.idle_after_ms()),
            _ => None,
        };
        [
            (self.queue.deadline(), Deadline::DirectiveEnd),
            (self.stroke.deadline(), Deadline::Stroke),
            (self.gaze.deadline(), Deadline::Gaze),
            (self.proximity.deadline(), Deadline::Proximity),
            (rest_switch, Deadline::RestRegime),
            (crossing, Deadline::NeedCrossing),
            (Some(self.boundary_due), Deadline::DayBoundary),
        ]
        .into_iter()
        .filter_map(|(t, kind)| t.map(|t| (t, kind)))
        .min()
    }

    /// Processes every internal deadline up to and including `t_ms`, then
    /// moves the clock to `t_ms`.
    pub fn advance_to(&mut self, t_ms: u64, out: &mut Vec<LogRecord>) {
        self.start(out);
        while let Some((t, kind)) = self.next_deadline().filter(|&(t, _)| t <= t_ms) {
            let t = t.max(self.clock.now_ms());
            self.set_clock(t);
            self.fire(kind, t, out);
        }
        if t_ms > self.clock.now_ms() {
            self.set_clock(t_ms);
        }
    }

    fn set_clock(&mut self, t: u64) {
        let crossed = self.clock.advance(t - self.clock.now_ms());
        debug_assert!(crossed.is_empty() || crossed.iter().all(|b| b.t_ms == t));
    }

    fn fire(&mut self, kind: Deadline, t: u64, out: &mut Vec<LogRecord>) {
        match kind {
            Deadline::DirectiveEnd => {
                if let Some(d) = self.queue.poll(t, self.mood.va, &self.display) {
                    out.push(LogRecord { t_ms: t, body: RecordBody::Directive(d) });
                }
            }
            Deadline::Stroke => {
                if let Some((k, at)) = self.stroke.poll(t) {
                    self.handle_user_event(k, at, out);
                }
            }
            Deadline::Gaze => {
                if let Some((k, at)) = self.gaze.poll(t) {
                    self.handle_user_event(k, at, out);
                }
            }
            Deadline::Proximity => {
                if let Some((k, at)) = self.proximity.poll(t) {
                    self.handle_user_event(k, at, out);
                }
            }
            Deadline::RestRegime | Deadline::NeedCrossing => self.reanchor(t, out),
            Deadline::DayBoundary => self.day_boundary(t, out),
        }
    }

    /// Brings the meters up to `t`, emitting any prompts crossed on the way.
    fn reanchor(&mut self, t: u64, out: &mut Vec<LogRecord>) {
        if t == self.needs_t {
            return;
        }
        let prev = self.needs;
        let mut next = self.needs_at(t);
        let prompts = check_thresholds(&prev, &mut next, &self.cfg.thresholds);
        self.needs = next;
        self.needs_t = t;
        if !prompts.is_empty() {
            out.push(LogRecord { t_ms: t, body: RecordBody::Needs(NeedsBody::from(&self.needs)) });
        }
        for prompt in prompts {
            self.handle_prompt(prompt, t, out);
        }
    }

    fn day_boundary(&mut self, t: u64, out: &mut Vec<LogRecord>) {
        self.reanchor(t, out);
        self.boundary_due += self.clock.day_length_ms();
        let day_index = t / self.clock.day_length_ms();
        self.temperament = end_of_day_update(self.temperament.va(), &self.day_log, self.cfg.eta);
        self.day_log.roll_over(day_index);
        self.mood = sample_daily_mood(self.temperament.va(), self.cfg.mood_range_r, day_index, &mut self.rng);
        let temp = self.temperament.va();
        out.push(LogRecord { t_ms: t, body: RecordBody::DayBoundary(DayBoundaryBody { day_index }) });
        out.push(LogRecord {
            t_ms: t,
            body: RecordBody::Temperament(TemperamentBody {
                valence: temp.valence,
                arousal: temp.arousal,
                archetype: self.temperament.archetype(),
                initial_mood: None,
            }),
        });
        out.push(LogRecord {
            t_ms: t,
            body: RecordBody::Mood(MoodBody { valence: self.mood.va.valence, arousal: self.mood.va.arousal, day_index }),
        });
        out.push(LogRecord { t_ms: t, body: RecordBody::Needs(NeedsBody::from(&self.needs)) });
        if let Some(d) = self.queue.refresh_passive(t, self.mood.va, &self.display) {
            out.push(LogRecord { t_ms: t, body: RecordBody::Directive(d) });
        }
    }

    fn log_event(&mut self, kind: EventKind, prompt: Option<NeedPrompt>, t: u64, out: &mut Vec<LogRecord>) -> (u64, AffectEvent) {
        let id = self.next_event_id;
        self.next_event_id += 1;
        out.push(LogRecord {
            t_ms: t,
            body: RecordBody::Event(EventBody { id, kind, severity: prompt.map(|p| p.severity) }),
        });
        let event = AffectEvent { kind, base_affect: self.cfg.base_affect.get(kind), t_ms: t };
        (id, event)
    }

    /// Appraises, feeds the mood and day log, and logs the appraisal.
    fn appraise_event(&mut self, id: u64, event: &AffectEvent, t: u64, out: &mut Vec<LogRecord>) -> VaPoint {
        let appraised = appraise(event, self.mood.va, self.temperament.va(), self.weights, self.cfg.noise_sigma, &mut self.rng);
        self.mood.va = mood_feedback(self.mood.va, &appraised, self.cfg.mood_gain);
        self.day_log.push(appraised);
        out.push(LogRecord {
            t_ms: t,
            body: RecordBody::Appraisal(AppraisalBody {
                event_id: id,
                valence: appraised.va.valence,
                arousal: appraised.va.arousal,
                mood: self.mood.va,
            }),
        });
        appraised.va
    }

    fn handle_user_event(&mut self, kind: EventKind, t: u64, out: &mut Vec<LogRecord>) {
        self.reanchor(t, out);
        self.last_interaction = Some(t);
        let (id, event) = self.log_event(kind, None, t, out);
        let va = self.appraise_event(id, &event, t, out);
        let label = select_response_with(va, self.cfg.band_boundary);
        out.push(LogRecord { t_ms: t, body: RecordBody::Response(ResponseBody { event_id: id, label }) });
        self.needs = apply_event_to_needs(&self.needs, kind, &self.cfg.replenish, &self.cfg.thresholds);
        out.push(LogRecord { t_ms: t, body: RecordBody::Needs(NeedsBody::from(&self.needs)) });
        let directive = plan_response_display(label, va, &self.display);
        if let Some(d) = self.queue.submit(directive, t) {
            out.push(LogRecord { t_ms: t, body: RecordBody::Directive(d) });
        }
    }

    fn handle_prompt(&mut self, prompt: NeedPrompt, t: u64, out: &mut Vec<LogRecord>) {
        let (id, event) = self.log_event(EventKind::NeedPrompt(prompt.need), Some(prompt), t, out);
        self.appraise_event(id, &event, t, out);
        if let Some(d) = self.queue.submit(plan_need_display(prompt, &self.display), t) {
            out.push(LogRecord { t_ms: t, body: RecordBody::Directive(d) });
        }
    }

    /// Applies one input at `t_ms` (after processing everything due up to
    /// then). Invalid input is rejected before any state changes.
    pub fn ingest(&mut self, t_ms: u64, sample: &Sample, out: &mut Vec<LogRecord>) -> Result<(), EngineError> {
        sample.validate()?;
        if t_ms < self.clock.now_ms() {
            return Err(EngineError::InThePast { t_ms, now_ms: self.clock.now_ms() });
        }
        self.advance_to(t_ms, out);
        match sample {
            Sample::Touch { region } => {
                if let Some((k, at)) = self.stroke.push(TouchContact { region: *region, t_ms })? {
                    self.handle_user_event(k, at, out);
                }
            }
            Sample::Word { text } => {
                let kind = classify_word(text, &self.lexicon);
                self.handle_user_event(kind, t_ms, out);
            }
            Sample::Gaze { angle_deg } => {
                if let Some((k, at)) = self.gaze.sample(*angle_deg, t_ms)? {
                    self.handle_user_event(k, at, out);
                }
            }
            Sample::Proximity { distance_m } => {
                for (k, at) in self.proximity.sample(*distance_m, t_ms)? {
                    self.handle_user_event(k, at, out);
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::display::Reason;
    use crate::log::RunLog;

    fn quiet() -> EngineConfig {
        EngineConfig { noise_sigma: 0.0, mood_range_r: 0.0, ..EngineConfig::default() }
    }

    fn touch(region: Region) -> Sample {
        Sample::Touch { region }
    }

    #[test]
    fn single_stroke_trace() {
        let mut e = Engine::new(quiet(), 42).unwrap();
        let mut out = Vec::new();
        e.ingest(0, &touch(Region::Front), &mut out).unwrap();
        e.ingest(400, &touch(Region::Back), &mut out).unwrap();
        e.advance_to(10_000, &mut out);
        let log = RunLog { records: out };
        assert_eq!(log.count("appraisal"), 1);
        let appraisal = log
            .records
            .iter()
            .find_map(|r| match &r.body {
                RecordBody::Appraisal(a) => Some((r.t_ms, a.valence, a.arousal)),
                _ => None,
            })
            .unwrap();
        assert_eq!(appraisal, (1501, 0.6, 0.3));
        let responses: Vec<_> = log.directives().filter(|d| d.reason == Reason::Response).collect();
        assert_eq!(responses.len(), 1);
        assert_eq!(responses[0].face, crate::affect::EmotionLabel::Happy);
    }

    #[test]
    fn touch_prompt_fires_when_meter_crosses() {
        let mut e = Engine::new(quiet(), 1).unwrap();
        let mut out = Vec::new();
        e.advance_to(800_000, &mut out);
        let events: Vec<_> = out
            .iter()
            .filter_map(|r| match &r.body {
                RecordBody::Event(ev) => Some((r.t_ms, ev.kind)),
                _ => None,
            })
            .collect();
        assert_eq!(events.first().map(|e| e.1), Some(EventKind::NeedPrompt(Need::Touch)));
        let t = events[0].0;
        assert!((700_000..=700_001).contains(&t), "{t}");
        assert!(e.needs().touch < 0.3);
    }

    #[test]
    fn advance_granularity_does_not_change_output() {
        let run = |step: u64| {
            let mut e = Engine::new(EngineConfig::default(), 9).unwrap();
            let mut out = Vec::new();
            let inputs = [(5_000u64, Sample::Word { text: "hello".into() }), (900_000, touch(Region::Top))];
            let mut t = 0;
            for (at, s) in &inputs {
                while t + step < *at {
                    t += step;
                    e.advance_to(t, &mut out);
                }
                e.ingest(*at, s, &mut out).unwrap();
                t = *at;
            }
            e.advance_to(2_000_000, &mut out);
            RunLog { records: out }.to_jsonl()
        };
        assert_eq!(run(1_000_000), run(777));
    }

    #[test]
    fn invalid_input_leaves_state_untouched() {
        let mut e = Engine::new(EngineConfig::default(), 3).unwrap();
        let mut out = Vec::new();
        e.advance_to(100, &mut out);
        let before = e.snapshot();
        let n = out.len();
        assert!(e.ingest(200, &Sample::Gaze { angle_deg: 500.0 }, &mut out).is_err());
        assert!(e.ingest(50, &Sample::Word { text: "hi".into() }, &mut out).is_err());
        assert_eq!(e.snapshot(), before);
        assert_eq!(out.len(), n);
    }

    #[test]
    fn restore_resumes_from_persisted_day() {
        let cfg = EngineConfig { day_length_s: 10.0, ..quiet() };
        let state = PersistedState { temperament: VaPoint::new(0.5, -0.5), needs: NeedsState { touch: 0.4, ..Default::default() }, day_index: 3 };
        let e = Engine::restore(cfg, 0, &state).unwrap();
        assert_eq!(e.now_ms(), 30_000);
        assert_eq!(e.temperament().va(), VaPoint::new(0.5, -0.5));
        assert_eq!(e.persisted().needs.touch, 0.4);
        assert_eq!(e.mood(), VaPoint::new(0.5, -0.5));
    }
}
