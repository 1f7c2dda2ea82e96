use serde::{Deserialize, Serialize};

use crate::decoder::EmotionPoint;

/// Version of the frame schema, sent as `v` in every frame.
pub const WIRE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MessageKind {
    Point,
    Status,
    End,
}

/// One frame on the wire: `{"v":1,"kind":"point","t":…,"valence":…,"arousal":…,"word":…}`.
/// Status frames carry `state` instead of the point fields; end frames
/// carry only `v` and `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamMessage {
    pub v: u32,
    pub kind: MessageKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arousal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
}

impl StreamMessage {
    pub fn point(p: &EmotionPoint) -> Self {
        Self {
            v: WIRE_VERSION,
            kind: MessageKind::Point,
            t: Some(p.t),
            valence: Some(p.valence),
            arousal: Some(p.arousal),
            word: Some(p.word().to_string()),
            state: None,
        }
    }

    pub fn status(state: impl Into<String>) -> Self {
        Self {
            v: WIRE_VERSION,
            kind: MessageKind::Status,
            t: None,
            valence: None,
            arousal: None,
            word: None,
            state: Some(state.into()),
        }
    }

    pub fn end() -> Self {
        Self {
            v: WIRE_VERSION,
            kind: MessageKind::End,
            t: None,
            valence: None,
            arousal: None,
            word: None,
            state: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("stream messages serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format_is_fixed() {
        let p = EmotionPoint::new(6.0, 1.0, 0.0).unwrap();
        assert_eq!(
            StreamMessage::point(&p).to_json(),
            r#"{"v":1,"kind":"point","t":6.0,"valence":1.0,"arousal":0.0,"word":"pleased"}"#
        );
        assert_eq!(StreamMessage::end().to_json(), r#"{"v":1,"kind":"end"}"#);
        assert_eq!(
            StreamMessage::status("running").to_json(),
            r#"{"v":1,"kind":"status","state":"running"}"#
        );
    }

    #[test]
    fn parses_back() {
        let m = StreamMessage::point(&EmotionPoint::new(1.5, -0.2, 0.3).unwrap());
        let back: StreamMessage = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }
}
