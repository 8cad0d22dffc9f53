//! Multimodal display planning: face, aura, sound cue and thought bubble,
//! plus the priority queue that decides which directive is showing.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::affect::{select_response_with, EmotionLabel, VaPoint, DEFAULT_BAND_BOUNDARY};
use crate::needs::{Need, NeedPrompt, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Reason {
    Response,
    NeedPrompt,
    PassiveMood,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aura {
    pub hue: f64,
    pub intensity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SoundCue {
    #[serde(rename = "cue1")]
    Cue1,
    #[serde(rename = "cue2")]
    Cue2,
    #[serde(rename = "cue3")]
    Cue3,
    #[serde(rename = "cue4")]
    Cue4,
    #[serde(rename = "cue5")]
    Cue5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bubble {
    Hand,
    Sleeping,
    Chat,
    Bowl,
    Heart,
}

/// The engine's output instruction for the rendering layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplayDirective {
    pub reason: Reason,
    pub face: EmotionLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aura: Option<Aura>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sound: Option<SoundCue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bubble: Option<Bubble>,
    pub duration_ms: u64,
    /// Simulated time at which the directive became visible.
    #[serde(rename = "t")]
    pub t_ms: u64,
}

impl DisplayDirective {
    /// Number of output channels used, counting the face.
    pub fn modality_count(&self) -> usize {
        1 + usize::from(self.aura.is_some()) + usize::from(self.sound.is_some()) + usize::from(self.bubble.is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HueMap {
    pub negative: f64,
    pub neutral: f64,
    pub positive: f64,
}

impl Default for HueMap {
    fn default() -> Self {
        HueMap { negative: 0.0, neutral: 60.0, positive: 120.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplayParams {
    pub aura_arousal: f64,
    pub sound_arousal: f64,
    pub response_ms: u64,
    pub need_ms: u64,
    pub passive_ms: u64,
    pub hue: HueMap,
    pub band_boundary: f64,
}

impl Default for DisplayParams {
    fn default() -> Self {
        DisplayParams {
            aura_arousal: 0.5,
            sound_arousal: 0.6,
            response_ms: 3000,
            need_ms: 5000,
            passive_ms: 60_000,
            hue: HueMap::default(),
            band_boundary: DEFAULT_BAND_BOUNDARY,
        }
    }
}

/// Red at -1, yellow at 0, green at +1; piecewise linear through the map.
pub fn valence_to_hue(v: f64, map: &HueMap) -> f64 {
    let v = v.clamp(-1.0, 1.0);
    if v < 0.0 {
        map.neutral + v * (map.neutral - map.negative)
    } else {
        map.neutral + v * (map.positive - map.neutral)
    }
}

pub fn cue_for(label: EmotionLabel) -> SoundCue {
    match label {
        EmotionLabel::Excited | EmotionLabel::Happy => SoundCue::Cue1,
        EmotionLabel::Angry => SoundCue::Cue2,
        EmotionLabel::Alert => SoundCue::Cue3,
        EmotionLabel::Upset | EmotionLabel::Sad => SoundCue::Cue4,
        EmotionLabel::Neutral | EmotionLabel::Sleepy | EmotionLabel::Content => SoundCue::Cue5,
    }
}

/// Face always; aura above the first arousal tier, sound above the second.
/// `t_ms` is left at zero until the directive is shown.
pub fn plan_response_display(label: EmotionLabel, va: VaPoint, params: &DisplayParams) -> DisplayDirective {
    let aura = (va.arousal > params.aura_arousal)
        .then(|| Aura { hue: valence_to_hue(va.valence, &params.hue), intensity: va.arousal.abs() });
    let sound = (va.arousal > params.sound_arousal).then(|| cue_for(label));
    DisplayDirective {
        reason: Reason::Response,
        face: label,
        aura,
        sound,
        bubble: None,
        duration_ms: params.response_ms,
        t_ms: 0,
    }
}

pub fn plan_passive_display(mood: VaPoint, params: &DisplayParams) -> DisplayDirective {
    DisplayDirective {
        reason: Reason::PassiveMood,
        face: select_response_with(mood, params.band_boundary),
        aura: None,
        sound: None,
        bubble: None,
        duration_ms: params.passive_ms,
        t_ms: 0,
    }
}

pub fn bubble_for(need: Need) -> Bubble {
    match need {
        Need::Touch => Bubble::Hand,
        Need::Rest => Bubble::Sleeping,
        Need::Social => Bubble::Chat,
        Need::Hunger => Bubble::Bowl,
    }
}

pub fn plan_need_display(prompt: NeedPrompt, params: &DisplayParams) -> DisplayDirective {
    let face = match prompt.severity {
        Severity::Low => EmotionLabel::Upset,
        Severity::Critical => EmotionLabel::Sad,
    };
    DisplayDirective {
        reason: Reason::NeedPrompt,
        face,
        aura: None,
        sound: None,
        bubble: Some(bubble_for(prompt.need)),
        duration_ms: params.need_ms,
        t_ms: 0,
    }
}

/// Decides which directive is visible. Responses preempt prompts and the
/// passive face; prompts preempt only the passive face and otherwise wait.
/// Within a class directives are shown in arrival order.
#[derive(Debug, Clone, Default)]
pub struct DirectiveQueue {
    active: Option<(DisplayDirective, u64)>,
    responses: VecDeque<DisplayDirective>,
    prompts: VecDeque<DisplayDirective>,
    passive_face: Option<EmotionLabel>,
}

impl DirectiveQueue {
    pub fn new() -> Self {
        DirectiveQueue::default()
    }

    pub fn active(&self) -> Option<&DisplayDirective> {
        self.active.as_ref().map(|(d, _)| d)
    }

    pub fn queued(&self) -> usize {
        self.responses.len() + self.prompts.len()
    }

    /// End of the active directive, if any.
    pub fn deadline(&self) -> Option<u64> {
        self.active.map(|(_, end)| end)
    }

    fn show(&mut self, mut d: DisplayDirective, now: u64) -> DisplayDirective {
        d.t_ms = now;
        self.passive_face = None;
        self.active = Some((d, now + d.duration_ms.max(1)));
        d
    }

    /// Offers a new response or prompt directive. Returns it stamped when it
    /// becomes visible immediately.
    pub fn submit(&mut self, d: DisplayDirective, now: u64) -> Option<DisplayDirective> {
        let active_reason = self.active.map(|(a, _)| a.reason);
        match (d.reason, active_reason) {
            (Reason::Response, Some(Reason::Response)) => {
                self.responses.push_back(d);
                None
            }
            (Reason::Response, Some(Reason::NeedPrompt)) => {
                let (preempted, _) = self.active.take().expect("active prompt");
                self.prompts.push_front(preempted);
                Some(self.show(d, now))
            }
            (Reason::NeedPrompt, Some(Reason::Response | Reason::NeedPrompt)) => {
                self.prompts.push_back(d);
                None
            }
            (Reason::PassiveMood, _) => None,
            _ => Some(self.show(d, now)),
        }
    }

    /// Expires the active directive if it has ended by `now` and shows
    /// whatever comes next: a queued response, a queued prompt, or the
    /// passive face for `mood`.
    pub fn poll(&mut self, now: u64, mood: VaPoint, params: &DisplayParams) -> Option<DisplayDirective> {
        let end = self.deadline().filter(|&end| end <= now)?;
        self.active = None;
        if let Some(next) = self.responses.pop_front().or_else(|| self.prompts.pop_front()) {
            return Some(self.show(next, end));
        }
        self.show_passive(end, mood, params)
    }

    /// Shows the passive face if nothing else is visible and the face differs
    /// from the one already shown.
    pub fn refresh_passive(&mut self, now: u64, mood: VaPoint, params: &DisplayParams) -> Option<DisplayDirective> {
        if self.active.is_some() {
            return None;
        }
        self.show_passive(now, mood, params)
    }

    fn show_passive(&mut self, now: u64, mood: VaPoint, params: &DisplayParams) -> Option<DisplayDirective> {
        let mut d = plan_passive_display(mood, params);
        if self.passive_face == Some(d.face) {
            return None;
        }
        d.t_ms = now;
        self.passive_face = Some(d.face);
        Some(d)
    }
}
