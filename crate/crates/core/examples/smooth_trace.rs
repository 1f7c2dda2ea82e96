//! Exponential smoothing of a raw trace for animation at 30 frames/s.
//!
//!     cargo run --example smooth_trace

use emotrace::decoder::{smooth, EmotionPoint, EmotionTrace, SmoothingSpec};
use emotrace::format::sig4;

fn main() -> anyhow::Result<()> {
    let raw = EmotionTrace::new(
        vec![
            EmotionPoint::new(5.0, 0.6, 0.1)?,
            EmotionPoint::new(6.0, 0.5, 0.6)?,
            EmotionPoint::new(7.0, -0.4, 0.7)?,
            EmotionPoint::new(8.0, -0.6, -0.3)?,
        ],
        "demo",
    )?;
    let spec = SmoothingSpec::default();
    let smoothed = smooth(&raw, spec);
    println!(
        "{} raw points -> {} rendered points (half-life {} s)",
        raw.len(),
        smoothed.len(),
        spec.half_life
    );
    for p in smoothed.points.iter().step_by(5) {
        println!("{:>6}  {:>8}  {:>8}  {}", sig4(p.t), sig4(p.valence), sig4(p.arousal), p.word());
    }
    Ok(())
}
