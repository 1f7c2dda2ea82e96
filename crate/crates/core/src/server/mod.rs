//! Live result streaming to browser clients.
//!
//! `/stream` upgrades to a WebSocket and carries one JSON [`StreamMessage`]
//! per text frame; `/status` reports the session state. A [`Hub`] fans each
//! message out to every client through a bounded per-client queue, so a
//! stalled client is dropped instead of blocking the decoder.

mod hub;
mod message;
mod serve;

pub use hub::{Hub, SessionState, StatusReport, CLIENT_QUEUE};
pub use message::{MessageKind, StreamMessage, WIRE_VERSION};
pub use serve::{serve, ReplayPacing, ServerConfig, ServerHandle, SessionSource};
