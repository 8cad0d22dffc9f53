//! Affect engine for a zoomorphic companion robot.
//!
//! Interactions (strokes, words, gaze, proximity) become valence/arousal
//! appraisals that drive short emotional displays, four decaying need
//! meters, a daily mood and a slowly evolving temperament. Everything runs
//! on simulated time from a single seed, so any scenario replays
//! byte-for-byte.

pub mod affect;
pub mod appraisal;
pub mod config;
pub mod display;
pub mod engine;
pub mod evolution;
pub mod harness;
pub mod interaction;
pub mod log;
pub mod needs;
pub mod scenario;

pub use affect::{clamp_va, select_response, EmotionLabel, VaPoint};
pub use appraisal::{add_noise, appraise, AffectEvent, AppraisedAffect, EventKind};
pub use config::EngineConfig;
pub use display::{DisplayDirective, Reason};
pub use engine::{Engine, Sample, Snapshot};
pub use evolution::{archetype_of, Archetype};
pub use harness::{run, RunOptions};
pub use log::{LogRecord, RecordBody, RunLog};
pub use needs::{Need, NeedsState};
pub use scenario::Scenario;
