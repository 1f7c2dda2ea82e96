use crate::error::{Error, Result};

use super::AudioBuffer;

/// Rectangular framing: `frame_length` samples every `hop_length` samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameSpec {
    frame_length: usize,
    hop_length: usize,
}

impl FrameSpec {
    pub fn new(frame_length: usize, hop_length: usize) -> Result<Self> {
        if frame_length == 0 || hop_length == 0 || hop_length > frame_length {
            return Err(Error::InvalidParameter(format!(
                "frame spec needs 0 < hop ({hop_length}) <= frame ({frame_length})"
            )));
        }
        Ok(Self {
            frame_length,
            hop_length,
        })
    }

    pub fn frame_length(&self) -> usize {
        self.frame_length
    }

    pub fn hop_length(&self) -> usize {
        self.hop_length
    }

    /// Number of complete frames in a signal of `len` samples. Trailing
    /// partial frames are dropped.
    pub fn frame_count(&self, len: usize) -> usize {
        if len < self.frame_length {
            0
        } else {
            (len - self.frame_length) / self.hop_length + 1
        }
    }

    pub fn frame_start(&self, k: usize) -> usize {
        k * self.hop_length
    }

    pub fn frames<'a>(&self, samples: &'a [f64]) -> Frames<'a> {
        Frames {
            samples,
            spec: *self,
            next: 0,
            count: self.frame_count(samples.len()),
        }
    }
}

/// Iterator over complete frames, borrowed from the underlying samples.
#[derive(Debug, Clone)]
pub struct Frames<'a> {
    samples: &'a [f64],
    spec: FrameSpec,
    next: usize,
    count: usize,
}

impl<'a> Iterator for Frames<'a> {
    type Item = &'a [f64];

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.count {
            return None;
        }
        let start = self.spec.frame_start(self.next);
        self.next += 1;
        Some(&self.samples[start..start + self.spec.frame_length])
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.count - self.next;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for Frames<'_> {}

impl AudioBuffer {
    pub fn frames(&self, spec: FrameSpec) -> Frames<'_> {
        spec.frames(self.samples())
    }
}
