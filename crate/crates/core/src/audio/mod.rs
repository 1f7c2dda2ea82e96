//! Audio decoding, resampling, framing and paced chunk sources.
//!
//! All analysis runs on mono [`AudioBuffer`]s at [`CANONICAL_RATE`].

mod buffer;
mod frames;
mod paced;
mod resample;
mod wav;

pub use buffer::AudioBuffer;
pub use frames::{FrameSpec, Frames};
pub use paced::{Chunk, PacedSource, Pacing};
pub use resample::resample;
pub use wav::{load_audio, load_wav, write_wav_f32, write_wav_i16};

/// Sample rate every input is converted to before analysis.
pub const CANONICAL_RATE: u32 = 22050;
