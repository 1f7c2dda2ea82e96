//! Real-time decoding: audio is released at (4×) wall-clock rate, analysed
//! as each window completes, and delivered to subscribers.
//!
//!     cargo run --release --example live_session

use std::sync::Arc;

use emotrace::audio::{PacedSource, Pacing};
use emotrace::decoder::{Decoder, LiveEvent, LiveSession};
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

    let (audio, _) = synth::click_train(3.0, 20.0, 0.4, 0.1, 22050);
    let source = PacedSource::new(audio, 1024, Pacing::Realtime { speed: 4.0 });
    let started = std::time::Instant::now();

    let session = LiveSession::new(decoder).on_event(move |e| {
        if let LiveEvent::Point(p) = e {
            println!(
                "[{:>6.2} s wall] t = {:>4}  ({}, {})  {}",
                started.elapsed().as_secs_f64(),
                sig4(p.t),
                sig4(p.valence),
                sig4(p.arousal),
                p.word()
            );
        }
    });
    let running = session.start(source);
    let report = running.join()?;
    println!(
        "{} points; median window analysis {:?}, max {:?}",
        report.points.len(),
        report.median_latency().unwrap_or_default(),
        report.max_latency().unwrap_or_default()
    );
    Ok(())
}
