//! RMS trace, onsets and per-window features for a WAV file, or for a
//! generated plucked line when no path is given.
//!
//!     cargo run --example extract_features -- [path.wav]

use emotrace::audio::load_audio;
use emotrace::decoder::{dynamic_windows, FeatureExtractor, WindowSpec};
use emotrace::dsp::{mean_rms, onset_density, rms_trace};
use emotrace::format::sig4;
use emotrace::synth;

fn main() -> anyhow::Result<()> {
    let audio = match std::env::args().nth(1) {
        Some(path) => load_audio(path)?,
        None => {
            let onsets: Vec<f64> = (0..40).map(|k| 0.2 + k as f64 * 0.3).collect();
            synth::plucked_notes(&onsets, &[262.0, 330.0, 392.0], 12.0, 0.5, 22050)
        }
    };
    let extractor = FeatureExtractor::default();
    let duration = audio.duration_seconds();

    let rms = rms_trace(&audio, extractor.rms_frames);
    let onsets = extractor.onsets(&audio)?;
    println!("duration       {} s", sig4(duration));
    println!("RMS frames     {}", rms.len());
    println!("mean RMS       {}", sig4(mean_rms(&rms, 0.0, duration)));
    println!("onsets         {}", onsets.len());
    println!("onset density  {} /s", sig4(onset_density(&onsets, 0.0, duration)));
    let first: Vec<String> = onsets.onset_times.iter().take(8).map(|t| sig4(*t)).collect();
    println!("first onsets   {}", first.join(", "));

    println!("\nwindow          density   mean RMS");
    let rate = audio.sample_rate();
    for (s, e) in dynamic_windows(audio.len(), rate, WindowSpec::dynamic()) {
        let w = extractor.window(&audio.samples()[s..e], rate)?;
        let r = f64::from(rate);
        println!(
            "{:>5}-{:<5} s  {:>8}  {:>9}",
            sig4(s as f64 / r),
            sig4(e as f64 / r),
            sig4(w.onset_density),
            sig4(w.mean_rms)
        );
    }
    Ok(())
}
