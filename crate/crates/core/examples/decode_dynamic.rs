//! Sliding-window decoding: one valence/arousal point per second after the
//! first five, each labelled with its circumplex word.
//!
//!     cargo run --example decode_dynamic

use std::sync::Arc;

use emotrace::decoder::Decoder;
use emotrace::format::sig4;
use emotrace::midlevel::{ConstantProvider, MidLevelVector};
use emotrace::regression::{EmotionModel, FeatureSubset};
use emotrace::synth;

fn main() -> anyhow::Result<()> {
    // busier and louder passages read as more aroused and less pleasant
    let model = EmotionModel::from_weights(
        &FeatureSubset::new2(),
        vec![3.0, 0.08],
        vec![1.5, 0.04],
        (0.0, vec![0.4, 0.3]),
        (0.2, vec![-0.3, -0.1]),
    )?;
    let provider = ConstantProvider(MidLevelVector::splat(0.5)?);
    let decoder = Decoder::new(Arc::new(model), Arc::new(provider));

    // a line that speeds up from 1 to 8 notes per second and swells
    let mut onsets = Vec::new();
    let mut t = 0.1;
    while t < 30.0 {
        onsets.push(t);
        t += 1.0 / (1.0 + 7.0 * t / 30.0);
    }
    let audio = synth::plucked_notes(&onsets, &[220.0, 262.0, 330.0, 440.0], 30.0, 0.3, 22050);

    println!("    t   valence   arousal  word");
    for w in decoder.dynamic_windows(&audio)? {
        let p = w.point;
        println!(
            "{:>5}  {:>8}  {:>8}  {}   (density {}, rms {})",
            sig4(p.t),
            sig4(p.valence),
            sig4(p.arousal),
            p.word(),
            sig4(w.features.onset_density()),
            sig4(w.features.mean_rms())
        );
    }
    Ok(())
}
