//! Framed RMS amplitude, magnitude STFT and a SuperFlux-style onset detector.

mod onset;
mod rms;
mod stft;

pub use onset::{
    onset_density, pick_onsets, superflux_odf, OnsetDetectionFunction, OnsetList, PeakPickParams,
    SuperFluxParams,
};
pub use rms::{mean_rms, rms_trace, RmsTrace};
pub use stft::{stft, Spectrogram, StftParams, Taper};
