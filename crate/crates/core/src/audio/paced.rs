use std::time::{Duration, Instant};

use super::AudioBuffer;

/// How fast a [`PacedSource`] releases chunks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pacing {
    /// Each chunk is released once its last sample would have been captured
    /// live. `speed` > 1 compresses wall time.
    Realtime { speed: f64 },
    /// Chunks are released immediately.
    Offline,
}

impl Pacing {
    pub fn realtime() -> Self {
        Pacing::Realtime { speed: 1.0 }
    }
}

/// A block of consecutive samples. Times come from the sample clock.
#[derive(Debug, Clone, PartialEq)]
pub struct Chunk {
    pub start_sample: usize,
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl Chunk {
    /// Time of the first sample, in seconds.
    pub fn start_time(&self) -> f64 {
        self.start_sample as f64 / f64::from(self.sample_rate)
    }

    /// Time just past the last sample, in seconds.
    pub fn end_time(&self) -> f64 {
        (self.start_sample + self.samples.len()) as f64 / f64::from(self.sample_rate)
    }
}

/// Splits a buffer into fixed-size chunks, optionally released at the rate
/// a live capture would produce them. The final chunk may be shorter.
#[derive(Debug)]
pub struct PacedSource {
    buffer: AudioBuffer,
    chunk: usize,
    pacing: Pacing,
    cursor: usize,
    started: Option<Instant>,
}

impl PacedSource {
    pub fn new(buffer: AudioBuffer, chunk: usize, pacing: Pacing) -> Self {
        assert!(chunk > 0, "chunk size must be positive");
        Self {
            buffer,
            chunk,
            pacing,
            cursor: 0,
            started: None,
        }
    }

    pub fn sample_rate(&self) -> u32 {
        self.buffer.sample_rate()
    }

    pub fn chunk_count(&self) -> usize {
        self.buffer.len().div_ceil(self.chunk)
    }
}

impl Iterator for PacedSource {
    type Item = Chunk;

    fn next(&mut self) -> Option<Chunk> {
        let len = self.buffer.len();
        if self.cursor >= len {
            return None;
        }
        let started = *self.started.get_or_insert_with(Instant::now);
        let start = self.cursor;
        let end = (start + self.chunk).min(len);
        self.cursor = end;

        if let Pacing::Realtime { speed } = self.pacing {
            let due = end as f64 / f64::from(self.buffer.sample_rate()) / speed.max(1e-9);
            let due = started + Duration::from_secs_f64(due);
            let now = Instant::now();
            if due > now {
                std::thread::sleep(due - now);
            }
        }

        Some(Chunk {
            start_sample: start,
            samples: self.buffer.samples()[start..end].to_vec(),
            sample_rate: self.buffer.sample_rate(),
        })
    }
}
