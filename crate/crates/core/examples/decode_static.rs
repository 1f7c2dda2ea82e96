//! Whole-clip predictions: short clips are looped to 15 s, long clips
//! average 15 s windows taken every 5 s.
//!
//!     cargo run --example decode_static

use std::sync::Arc;

use emotrace::decoder::{static_window_starts, Decoder, WindowSpec};
use emotrace::format::sig4;
use emotrace::midlevel::{ConstantProvider, MidLevelVector};
use emotrace::regression::{EmotionModel, FeatureSubset};
use emotrace::synth;

fn main() -> anyhow::Result<()> {
    let model = EmotionModel::from_weights(
        &FeatureSubset::new2(),
        vec![3.0, 0.08],
        vec![1.5, 0.04],
        (0.0, vec![0.4, 0.3]),
        (0.2, vec![-0.3, -0.1]),
    )?;
    let provider = ConstantProvider(MidLevelVector::splat(0.5)?);
    let decoder = Decoder::new(Arc::new(model), Arc::new(provider));

    for (seconds, rate) in [(6.0, 2.0), (15.0, 4.0), (25.0, 6.0), (40.0, 3.0)] {
        let (audio, _) = synth::click_train(rate, seconds, 0.4, 0.1, 22050);
        let starts = static_window_starts(audio.len(), 22050, WindowSpec::static_mode());
        let p = decoder.static_decode(&audio)?;
        let starts: Vec<String> = starts.iter().map(|s| sig4(*s as f64 / 22050.0)).collect();
        println!(
            "{:>4} s at {rate} Hz  windows at [{}]  valence {}  arousal {}  {}",
            seconds,
            starts.join(", "),
            sig4(p.valence),
            sig4(p.arousal),
            p.word()
        );
    }
    Ok(())
}
