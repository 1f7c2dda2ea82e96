use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::audio::{AudioBuffer, FrameSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Taper {
    Hann,
    Rectangular,
}

impl Taper {
    /// Periodic window of length `n`.
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Taper::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
                .collect(),
            Taper::Rectangular => vec![1.0; n],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StftParams {
    pub fft_size: usize,
    pub hop: usize,
    pub taper: Taper,
}

impl Default for StftParams {
    /// 2048-point Hann frames every 220 samples (about 100 frames/s at 22050 Hz).
    fn default() -> Self {
        Self {
            fft_size: 2048,
            hop: 220,
            taper: Taper::Hann,
        }
    }
}

/// Magnitude spectrogram, `frames × (fft_size/2 + 1)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    magnitudes: Vec<f64>,
    n_frames: usize,
    n_bins: usize,
    frame_rate: f64,
    /// Time of frame 0's center, seconds.
    first_frame_time: f64,
    bin_hz: f64,
}

impl Spectrogram {
    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn first_frame_time(&self) -> f64 {
        self.first_frame_time
    }

    pub fn frame(&self, t: usize) -> &[f64] {
        &self.magnitudes[t * self.n_bins..(t + 1) * self.n_bins]
    }

    pub fn bin_frequency(&self, b: usize) -> f64 {
        b as f64 * self.bin_hz
    }

    pub fn bin_frequencies(&self) -> Vec<f64> {
        (0..self.n_bins).map(|b| self.bin_frequency(b)).collect()
    }

    /// Builds a spectrogram from raw rows; used by tests and custom front ends.
    pub fn from_rows(rows: Vec<Vec<f64>>, frame_rate: f64, bin_hz: f64) -> Result<Self> {
        let n_bins = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_bins) {
            return Err(Error::InvalidParameter("ragged spectrogram rows".into()));
        }
        if rows.iter().flatten().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidParameter(
                "magnitudes must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            n_frames: rows.len(),
            n_bins,
            magnitudes: rows.into_iter().flatten().collect(),
            frame_rate,
            first_frame_time: 0.0,
            bin_hz,
        })
    }
}

/// Magnitude STFT over complete frames (no padding at either end).
pub fn stft(buf: &AudioBuffer, params: StftParams) -> Result<Spectrogram> {
    let StftParams {
        fft_size,
        hop,
        taper,
    } = params;
    if !fft_size.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "fft size {fft_size} is not a power of two"
        )));
    }
    let spec = FrameSpec::new(fft_size, hop)?;
    let window = taper.coefficients(fft_size);
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(fft_size);
    let n_bins = fft_size / 2 + 1;
    let n_frames = spec.frame_count(buf.len());

    let mut magnitudes = Vec::with_capacity(n_frames * n_bins);
    let mut scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex::default(); fft_size];
    for frame in buf.frames(spec) {
        for ((c, &x), &w) in line.iter_mut().zip(frame).zip(&window) {
            *c = Complex::new(x * w, 0.0);
        }
        fft.process_with_scratch(&mut line, &mut scratch);
        magnitudes.extend(line[..n_bins].iter().map(|c| c.norm()));
    }

    let rate = f64::from(buf.sample_rate());
    Ok(Spectrogram {
        magnitudes,
        n_frames,
        n_bins,
        frame_rate: rate / hop as f64,
        first_frame_time: fft_size as f64 / 2.0 / rate,
        bin_hz: rate / fft_size as f64,
    })
}
