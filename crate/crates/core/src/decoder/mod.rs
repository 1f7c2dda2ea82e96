//! Windowed emotion decoding.
//!
//! Dynamic mode predicts one point per 5 s window every second, stamped at
//! the window end, so every point depends only on audio already heard.
//! Static mode summarizes a whole clip from 15 s windows, looping short
//! clips and averaging long ones.

mod circumplex;
mod decode;
mod extract;
mod live;
mod smooth;
mod trace;
mod window;

pub use circumplex::{nearest_emotion_word, Emotion, NEUTRAL_RADIUS};
pub use decode::{Decoder, StreamingDecoder, WindowOutput};
pub use extract::{FeatureExtractor, WindowFeatures};
pub use live::{Fanout, LiveEvent, LiveReport, LiveSession, RunningSession, StopHandle};
pub use smooth::{smooth, SmoothingSpec};
pub use trace::{
    read_trace_records, write_trace_csv, write_trace_jsonl, EmotionPoint, EmotionTrace,
    TraceRecord,
};
pub use window::{dynamic_windows, static_window_starts, WindowSpec};
