use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::audio::{resample, AudioBuffer, CANONICAL_RATE};
use crate::error::{Error, Result};
use crate::midlevel::MidLevelProvider;
use crate::regression::{predict, EmotionModel, FeatureVector, Prediction};

use super::{dynamic_windows, static_window_starts, EmotionPoint, EmotionTrace, FeatureExtractor, WindowSpec};

/// Model, mid-level provider and feature settings bundled for decoding.
#[derive(Clone)]
pub struct Decoder {
    model: Arc<EmotionModel>,
    provider: Arc<dyn MidLevelProvider>,
    extractor: FeatureExtractor,
    dynamic: WindowSpec,
    static_spec: WindowSpec,
}

impl std::fmt::Debug for Decoder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Decoder")
            .field("features", &self.model.feature_names)
            .field("provider", &self.provider.describe())
            .field("dynamic", &self.dynamic)
            .field("static", &self.static_spec)
            .finish()
    }
}

/// One analysed window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowOutput {
    pub point: EmotionPoint,
    pub features: FeatureVector,
}

impl Decoder {
    pub fn new(model: Arc<EmotionModel>, provider: Arc<dyn MidLevelProvider>) -> Self {
        Self {
            model,
            provider,
            extractor: FeatureExtractor::default(),
            dynamic: WindowSpec::dynamic(),
            static_spec: WindowSpec::static_mode(),
        }
    }

    pub fn with_window(mut self, spec: WindowSpec) -> Self {
        self.dynamic = spec;
        self
    }

    pub fn with_static_window(mut self, spec: WindowSpec) -> Self {
        self.static_spec = spec;
        self
    }

    pub fn with_extractor(mut self, extractor: FeatureExtractor) -> Self {
        self.extractor = extractor;
        self
    }

    pub fn window_spec(&self) -> WindowSpec {
        self.dynamic
    }

    pub fn model(&self) -> &EmotionModel {
        &self.model
    }

    /// Features for the window `[t_start, t_end)` whose samples are `samples`.
    pub fn window_features(
        &self,
        samples: &[f64],
        sample_rate: u32,
        t_start: f64,
        t_end: f64,
    ) -> Result<FeatureVector> {
        let signal = self.extractor.window(samples, sample_rate)?;
        let mid = self.provider.window_features(t_start, t_end)?;
        Ok(FeatureVector::new(mid, signal.onset_density, signal.mean_rms))
    }

    fn analyze(&self, samples: &[f64], sample_rate: u32, start: usize) -> Result<WindowOutput> {
        let rate = f64::from(sample_rate);
        let t_start = start as f64 / rate;
        let t_end = (start + samples.len()) as f64 / rate;
        let features = self.window_features(samples, sample_rate, t_start, t_end)?;
        let prediction = predict(&self.model, &features)?;
        Ok(WindowOutput {
            point: EmotionPoint::at(t_end, prediction),
            features,
        })
    }

    /// Per-window outputs of the dynamic mode over a whole buffer. Windows
    /// are evaluated in parallel; results do not depend on scheduling.
    pub fn dynamic_windows(&self, audio: &AudioBuffer) -> Result<Vec<WindowOutput>> {
        let audio = canonical(audio);
        let rate = audio.sample_rate();
        dynamic_windows(audio.len(), rate, self.dynamic)
            .into_par_iter()
            .map(|(s, e)| self.analyze(&audio.samples()[s..e], rate, s))
            .collect()
    }

    /// One point per window end `t = W, W + H, …, ≤ duration`. Audio shorter
    /// than one window gives an empty trace.
    pub fn dynamic_decode(&self, audio: &AudioBuffer) -> Result<EmotionTrace> {
        let points = self.dynamic_windows(audio)?.into_iter().map(|w| w.point).collect();
        EmotionTrace::new(points, "dynamic")
    }

    /// Static prediction for a whole clip: clips shorter than the static
    /// window are looped to length and analysed once; longer clips average
    /// the windows at hop multiples that fit entirely. The point is stamped
    /// at the clip duration.
    pub fn static_decode(&self, audio: &AudioBuffer) -> Result<EmotionPoint> {
        if audio.is_empty() {
            return Err(Error::InvalidAudio("cannot decode empty audio".into()));
        }
        let audio = canonical(audio);
        let rate = audio.sample_rate();
        let w = self.static_spec.window_samples(rate);
        let looped;
        let source: &AudioBuffer = if audio.len() < w {
            looped = audio.tiled_to(w);
            &looped
        } else {
            &audio
        };
        let starts = static_window_starts(source.len(), rate, self.static_spec);
        let predictions: Vec<Prediction> = starts
            .par_iter()
            .map(|&s| {
                let out = self.analyze(&source.samples()[s..s + w], rate, s)?;
                Ok(Prediction {
                    valence: out.point.valence,
                    arousal: out.point.arousal,
                })
            })
            .collect::<Result<_>>()?;
        let n = predictions.len() as f64;
        let valence = predictions.iter().map(|p| p.valence).sum::<f64>() / n;
        let arousal = predictions.iter().map(|p| p.arousal).sum::<f64>() / n;
        EmotionPoint::new(audio.duration_seconds(), valence.clamp(-1.0, 1.0), arousal.clamp(-1.0, 1.0))
    }

    pub fn streaming(&self, sample_rate: u32) -> StreamingDecoder {
        StreamingDecoder::new(self.clone(), sample_rate)
    }
}

fn canonical(audio: &AudioBuffer) -> std::borrow::Cow<'_, AudioBuffer> {
    if audio.sample_rate() == CANONICAL_RATE {
        std::borrow::Cow::Borrowed(audio)
    } else {
        std::borrow::Cow::Owned(resample(audio, CANONICAL_RATE))
    }
}

/// Incremental dynamic decoding over pushed sample chunks.
///
/// Windows are analysed from exactly the samples an offline pass would use,
/// so the emitted points equal [`Decoder::dynamic_decode`] bit for bit.
#[derive(Debug)]
pub struct StreamingDecoder {
    decoder: Decoder,
    sample_rate: u32,
    window: usize,
    hop: usize,
    /// Retained samples, starting at absolute index `buffer_start`.
    buffer: Vec<f64>,
    buffer_start: usize,
    next_start: usize,
    latencies: Vec<Duration>,
}

impl StreamingDecoder {
    pub fn new(decoder: Decoder, sample_rate: u32) -> Self {
        let spec = decoder.dynamic;
        Self {
            window: spec.window_samples(sample_rate),
            hop: spec.hop_samples(sample_rate),
            decoder,
            sample_rate,
            buffer: Vec::new(),
            buffer_start: 0,
            next_start: 0,
            latencies: Vec::new(),
        }
    }

    /// Appends samples and returns the points of every window completed by them.
    pub fn push(&mut self, samples: &[f64]) -> Result<Vec<EmotionPoint>> {
        self.buffer.extend_from_slice(samples);
        let mut out = Vec::new();
        while self.next_start + self.window <= self.buffer_start + self.buffer.len() {
            let offset = self.next_start - self.buffer_start;
            let started = Instant::now();
            let window = &self.buffer[offset..offset + self.window];
            let result = self.decoder.analyze(window, self.sample_rate, self.next_start)?;
            self.latencies.push(started.elapsed());
            out.push(result.point);
            self.next_start += self.hop;
        }
        let keep_from = self.next_start.min(self.buffer_start + self.buffer.len());
        let drop = keep_from - self.buffer_start;
        if drop > 0 {
            self.buffer.drain(..drop);
            self.buffer_start = keep_from;
        }
        Ok(out)
    }

    /// Wall time spent analysing each window so far.
    pub fn latencies(&self) -> &[Duration] {
        &self.latencies
    }
}
