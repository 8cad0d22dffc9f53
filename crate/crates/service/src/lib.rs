//! Live affect engine behind a WebSocket endpoint at `/ws`.

pub mod protocol;
pub mod server;
pub mod state_file;

pub use protocol::{ClientMessage, ServerMessage};
pub use server::{spawn, RunningService, ServiceConfig, ServiceError, Summary};
