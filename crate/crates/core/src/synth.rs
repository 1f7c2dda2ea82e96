//! Deterministic test signals with known ground truth.

use std::f64::consts::PI;

use crate::audio::AudioBuffer;

/// Length of one synthetic click, seconds.
const CLICK_SECONDS: f64 = 0.012;

/// Short percussive burst: a decaying 3 kHz partial over a decaying 700 Hz partial.
fn click_shape(sample_rate: u32) -> Vec<f64> {
    let rate = f64::from(sample_rate);
    let n = (CLICK_SECONDS * rate) as usize;
    (0..n)
        .map(|i| {
            let t = i as f64 / rate;
            let env = (-t / 0.003).exp();
            env * (0.6 * (2.0 * PI * 3000.0 * t).sin() + 0.4 * (2.0 * PI * 700.0 * t).sin())
        })
        .collect()
}

/// Clicks every `1 / rate_hz` seconds starting at `offset`, scaled to
/// `amplitude`. Returns the signal and the click times.
pub fn click_train(
    rate_hz: f64,
    seconds: f64,
    amplitude: f64,
    offset: f64,
    sample_rate: u32,
) -> (AudioBuffer, Vec<f64>) {
    let times: Vec<f64> = (0..)
        .map(|k| offset + k as f64 / rate_hz)
        .take_while(|&t| t < seconds)
        .collect();
    (clicks_at(&times, seconds, amplitude, sample_rate), times)
}

/// Clicks at arbitrary times.
pub fn clicks_at(times: &[f64], seconds: f64, amplitude: f64, sample_rate: u32) -> AudioBuffer {
    let rate = f64::from(sample_rate);
    let len = (seconds * rate).round() as usize;
    let shape = click_shape(sample_rate);
    let mut x = vec![0.0; len];
    for &t in times {
        let start = (t * rate).round() as usize;
        for (i, s) in shape.iter().enumerate() {
            if let Some(slot) = x.get_mut(start + i) {
                *slot += amplitude * s;
            }
        }
    }
    AudioBuffer::normalized(x, sample_rate).expect("finite synthetic signal")
}

/// Steady sum of sinusoids `(frequency, amplitude)`.
pub fn tones(partials: &[(f64, f64)], seconds: f64, sample_rate: u32) -> AudioBuffer {
    let rate = f64::from(sample_rate);
    let len = (seconds * rate).round() as usize;
    let x = (0..len)
        .map(|i| {
            let t = i as f64 / rate;
            partials
                .iter()
                .map(|&(f, a)| a * (2.0 * PI * f * t).sin())
                .sum()
        })
        .collect();
    AudioBuffer::normalized(x, sample_rate).expect("finite synthetic signal")
}

/// Plucked notes with exponential decay at the given onset times, cycling
/// through `pitches`. A rough stand-in for a piano line.
pub fn plucked_notes(
    onsets: &[f64],
    pitches: &[f64],
    seconds: f64,
    amplitude: f64,
    sample_rate: u32,
) -> AudioBuffer {
    let rate = f64::from(sample_rate);
    let len = (seconds * rate).round() as usize;
    let mut x = vec![0.0; len];
    let note_len = (0.8 * rate) as usize;
    for (k, &t) in onsets.iter().enumerate() {
        let f = pitches[k % pitches.len().max(1)];
        let start = (t * rate).round() as usize;
        for i in 0..note_len {
            let Some(slot) = x.get_mut(start + i) else { break };
            let tt = i as f64 / rate;
            let env = (-tt / 0.15).exp() * (1.0 - (-tt / 0.001).exp());
            *slot += amplitude
                * env
                * (0.7 * (2.0 * PI * f * tt).sin() + 0.3 * (4.0 * PI * f * tt).sin());
        }
    }
    AudioBuffer::normalized(x, sample_rate).expect("finite synthetic signal")
}
