//! Wire messages. Every frame is one JSON object tagged by `type`.

use affect_core::engine::Snapshot;
use affect_core::interaction::Region;
use affect_core::{DisplayDirective, EventKind, Sample};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClientMessage {
    Touch { region: String },
    Word { text: String },
    Gaze { angle_deg: f64 },
    Proximity { distance_m: f64 },
    GetState,
    SetCompression { factor: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Directive { body: DisplayDirective },
    State { body: Snapshot },
    EventAck { kind: EventKind },
    Error { detail: String },
}

/// A client message after validation, ready for the tick loop.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Input(Sample),
    GetState,
    SetCompression(f64),
}

/// Parses and validates one text frame. Nothing invalid gets past here.
pub fn parse_client(text: &str) -> Result<Command, String> {
    let msg: ClientMessage = serde_json::from_str(text).map_err(|e| format!("malformed message: {e}"))?;
    let sample = match msg {
        ClientMessage::Touch { region } => {
            Sample::Touch { region: region.parse::<Region>().map_err(|e| e.to_string())? }
        }
        ClientMessage::Word { text } => Sample::Word { text },
        ClientMessage::Gaze { angle_deg } => Sample::Gaze { angle_deg },
        ClientMessage::Proximity { distance_m } => Sample::Proximity { distance_m },
        ClientMessage::GetState => return Ok(Command::GetState),
        ClientMessage::SetCompression { factor } => {
            if !(factor.is_finite() && factor > 0.0) {
                return Err(format!("compression factor must be positive, got {factor}"));
            }
            return Ok(Command::SetCompression(factor));
        }
    };
    sample.validate().map_err(|e| e.to_string())?;
    Ok(Command::Input(sample))
}

impl ServerMessage {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages serialize")
    }
}
