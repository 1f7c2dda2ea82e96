//! Serve a live decode over WebSocket. Connect a client to
//! `ws://127.0.0.1:8765/stream`; `/status` reports the session state.
//!
//!     cargo run --release --example stream_server
//!     websocat ws://127.0.0.1:8765/stream

use std::sync::Arc;
use std::time::Duration;

use emotrace::audio::{PacedSource, Pacing};
use emotrace::decoder::{Decoder, LiveSession};
use emotrace::midlevel::{ConstantProvider, MidLevelVector};
use emotrace::regression::{EmotionModel, FeatureSubset};
use emotrace::server::{serve, ServerConfig, SessionSource};
use emotrace::synth;

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let model = EmotionModel::from_weights(
        &FeatureSubset::new2(),
        vec![3.0, 0.08],
        vec![1.5, 0.04],
        (0.0, vec![0.4, 0.3]),
        (0.2, vec![-0.3, -0.1]),
    )?;
    let provider = ConstantProvider(MidLevelVector::splat(0.5)?);
    let decoder = Decoder::new(Arc::new(model), Arc::new(provider));

    let onsets: Vec<f64> = (0..150).map(|k| 0.1 + k as f64 * 0.2).collect();
    let audio = synth::plucked_notes(&onsets, &[220.0, 330.0, 294.0], 30.0, 0.4, 22050);

    let mut config = ServerConfig::new("127.0.0.1:8765".parse()?);
    config.wait_for_clients = 1;
    let source = SessionSource::Live {
        session: LiveSession::new(decoder),
        source: PacedSource::new(audio, 1024, Pacing::realtime()),
    };
    let handle = serve(config, source).await?;
    println!("waiting for a client on ws://{}/stream", handle.local_addr());
    handle.wait(Duration::from_secs(2)).await?;
    println!("session ended");
    Ok(())
}
