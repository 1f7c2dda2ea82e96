use crate::audio::{AudioBuffer, FrameSpec};
use crate::dsp::{
    mean_rms, onset_density, pick_onsets, rms_trace, stft, superflux_odf, OnsetList,
    PeakPickParams, StftParams, SuperFluxParams,
};
use crate::error::Result;

/// Settings for the two signal-derived features of one analysis window.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureExtractor {
    pub stft: StftParams,
    pub superflux: SuperFluxParams,
    pub peaks: PeakPickParams,
    pub rms_frames: FrameSpec,
}

impl Default for FeatureExtractor {
    fn default() -> Self {
        Self {
            stft: StftParams::default(),
            superflux: SuperFluxParams::default(),
            peaks: PeakPickParams::default(),
            rms_frames: FrameSpec::new(2048, 512).expect("valid default framing"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowFeatures {
    /// Onset times relative to the window start.
    pub onsets: OnsetList,
    pub onset_density: f64,
    pub mean_rms: f64,
}

impl FeatureExtractor {
    /// Onset detection over a whole signal.
    pub fn onsets(&self, buf: &AudioBuffer) -> Result<OnsetList> {
        let spec = stft(buf, self.stft)?;
        let odf = superflux_odf(&spec, self.superflux);
        Ok(pick_onsets(&odf, self.peaks))
    }

    /// Features of a window that uses only the samples it is given.
    pub fn window(&self, samples: &[f64], sample_rate: u32) -> Result<WindowFeatures> {
        let buf = AudioBuffer::new(samples.to_vec(), sample_rate)?;
        let duration = buf.duration_seconds();
        let onsets = self.onsets(&buf)?;
        let rms = rms_trace(&buf, self.rms_frames);
        let (density, level) = if duration > 0.0 {
            (
                onset_density(&onsets, 0.0, duration),
                mean_rms(&rms, 0.0, duration),
            )
        } else {
            (0.0, 0.0)
        };
        Ok(WindowFeatures {
            onsets,
            onset_density: density,
            mean_rms: level,
        })
    }
}
