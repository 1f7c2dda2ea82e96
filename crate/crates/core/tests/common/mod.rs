#![allow(dead_code)]

use std::sync::Arc;

use emotrace::decoder::{Decoder, EmotionPoint, EmotionTrace};
use emotrace::midlevel::{ConstantProvider, MidLevelVector};
use emotrace::regression::{EmotionModel, FeatureSubset};

/// A two-feature model: arousal rises with onset density, valence falls
/// with it. Keeps predictions inside the unit square for typical input.
pub fn new2_model() -> EmotionModel {
    EmotionModel::from_weights(
        &FeatureSubset::new2(),
        vec![2.0, 0.1],
        vec![2.0, 0.1],
        (0.0, vec![0.3, 0.2]),
        (0.1, vec![-0.2, 0.0]),
    )
    .unwrap()
}

pub fn decoder() -> Decoder {
    let provider = ConstantProvider(MidLevelVector::splat(0.5).unwrap());
    Decoder::new(Arc::new(new2_model()), Arc::new(provider))
}

pub fn trace(times: &[f64]) -> EmotionTrace {
    let points = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let a = (i as f64 * 0.7).sin() * 0.8;
            let v = (i as f64 * 0.3).cos() * 0.8;
            EmotionPoint::new(t, v, a).unwrap()
        })
        .collect();
    EmotionTrace::new(points, "test").unwrap()
}

use emotrace::regression::{Dataset, DatasetRow, FeatureVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

/// Ratings that are an exact linear function of all nine features.
pub fn exact_dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let wa = [0.3, -0.2, 0.1, 0.05, -0.4, 0.2, 0.1, 0.5, 2.0];
    let wv = [-0.1, 0.4, 0.2, -0.3, 0.1, 0.0, 0.3, -0.2, 1.0];
    let rows = (0..n)
        .map(|i| {
            let mut x = [0.0; 9];
            for v in x.iter_mut() {
                *v = rng.random_range(-1.0..1.0);
            }
            x[7] = rng.random_range(0.0..8.0);
            x[8] = rng.random_range(0.0..0.3);
            let dot = |w: &[f64; 9]| w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
            DatasetRow {
                clip_id: format!("clip{i:03}"),
                features: FeatureVector(x),
                arousal: 0.1 + dot(&wa),
                valence: -0.2 + dot(&wv),
            }
        })
        .collect();
    Dataset::new(rows).unwrap()
}

/// Gaussian features with a known linear model plus rating noise.
pub fn noisy_dataset(n: usize, noise: f64, seed: u64) -> Dataset {
    let mut rng = StdRng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let wa = [0.25, 0.3, 0.2, 0.1, 0.15, 0.1, 0.2, 0.35, 0.3];
    let wv = [0.3, 0.1, 0.25, 0.2, 0.3, 0.25, 0.1, 0.2, 0.25];
    let rows = (0..n)
        .map(|i| {
            let mut x = [0.0; 9];
            for v in x.iter_mut() {
                *v = normal.sample(&mut rng);
            }
            let dot = |w: &[f64; 9]| w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
            let arousal = dot(&wa) + noise * normal.sample(&mut rng);
            let valence = dot(&wv) + noise * normal.sample(&mut rng);
            DatasetRow {
                clip_id: format!("c{i:04}"),
                features: FeatureVector(x),
                arousal,
                valence,
            }
        })
        .collect();
    Dataset::new(rows).unwrap()
}

/// A model whose outputs read back the signal features: arousal is
/// `0.1 × onset_density`, valence is `2 × mean_rms`.
pub fn probe_decoder() -> Decoder {
    let model = EmotionModel::from_weights(
        &FeatureSubset::new2(),
        vec![0.0, 0.0],
        vec![1.0, 1.0],
        (0.0, vec![0.1, 0.0]),
        (0.0, vec![0.0, 2.0]),
    )
    .unwrap();
    let provider = ConstantProvider(MidLevelVector::splat(0.0).unwrap());
    Decoder::new(Arc::new(model), Arc::new(provider))
}

/// A few seconds of a plucked line whose note rate changes over time.
pub fn varied_piece(seconds: f64, seed: u64) -> emotrace::audio::AudioBuffer {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut onsets = Vec::new();
    let mut t = 0.1;
    while t < seconds {
        onsets.push(t);
        let rate = 1.5 + 5.0 * (0.5 + 0.5 * (t / 7.0).sin());
        t += rng.random_range(0.8..1.2) / rate;
    }
    let pitches = [220.0, 277.2, 329.6, 440.0, 392.0, 293.7];
    emotrace::synth::plucked_notes(&onsets, &pitches, seconds, 0.4, 22050)
}
