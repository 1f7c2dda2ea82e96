use std::f64::consts::PI;

use super::AudioBuffer;

/// Zero crossings of the sinc kernel on each side, at the lower of the two rates.
const HALF_ZERO_CROSSINGS: f64 = 24.0;
/// Passband edge as a fraction of the lower Nyquist frequency.
const ROLLOFF: f64 = 0.94;

/// Band-limited sample-rate conversion with a Blackman-windowed sinc kernel.
///
/// Output length is `round(len * target / source)`. Equal rates return an
/// identical copy.
pub fn resample(buf: &AudioBuffer, target_rate: u32) -> AudioBuffer {
    assert!(target_rate > 0, "target rate must be positive");
    let source_rate = buf.sample_rate();
    if source_rate == target_rate {
        return buf.clone();
    }
    let input = buf.samples();
    let ratio = f64::from(target_rate) / f64::from(source_rate);
    let out_len = (input.len() as f64 * ratio).round() as usize;

    let cutoff = ROLLOFF * ratio.min(1.0);
    // kernel half-width in input samples
    let half_width = HALF_ZERO_CROSSINGS / cutoff;

    let out: Vec<f64> = (0..out_len)
        .map(|i| {
            let pos = i as f64 / ratio;
            let lo = ((pos - half_width).ceil().max(0.0)) as usize;
            let hi = ((pos + half_width).floor() as usize).min(input.len().saturating_sub(1));
            let mut acc = 0.0;
            for (j, &x) in input.iter().enumerate().take(hi + 1).skip(lo) {
                let d = pos - j as f64;
                acc += x * cutoff * sinc(cutoff * d) * blackman(d / half_width);
            }
            acc
        })
        .collect();

    AudioBuffer::normalized(out, target_rate).expect("resampled samples are finite")
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Blackman window over `u` in `[-1, 1]`.
fn blackman(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        return 0.0;
    }
    let phase = PI * (u + 1.0);
    0.42 - 0.5 * phase.cos() + 0.08 * (2.0 * phase).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(freq: f64, amp: f64, rate: u32, seconds: f64) -> AudioBuffer {
        let n = (seconds * f64::from(rate)) as usize;
        let x = (0..n)
            .map(|i| amp * (2.0 * PI * freq * i as f64 / f64::from(rate)).sin())
            .collect();
        AudioBuffer::new(x, rate).unwrap()
    }

    fn rms(x: &[f64]) -> f64 {
        (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
    }

    #[test]
    fn identity_is_bitwise() {
        let b = tone(440.0, 0.5, 22050, 0.3);
        assert_eq!(resample(&b, 22050), b);
    }

    #[test]
    fn one_second_keeps_duration() {
        let b = AudioBuffer::silence(48000, 48000);
        let r = resample(&b, 22050);
        assert!((r.len() as i64 - 22050).abs() <= 1);
    }

    #[test]
    fn dominant_bin_is_preserved() {
        let b = tone(440.0, 0.5, 44100, 1.0);
        let r = resample(&b, 22050);
        // oracle: plain DFT magnitude peak over one 2048-sample frame
        let n = 2048;
        let frame = &r.samples()[4096..4096 + n];
        let peak = (0..=n / 2)
            .max_by(|&a, &b| dft_mag(frame, a).total_cmp(&dft_mag(frame, b)))
            .unwrap();
        let expected = 440.0 * n as f64 / 22050.0;
        assert!((peak as f64 - expected).abs() <= 1.0, "peak bin {peak}, want {expected}");
    }

    fn dft_mag(x: &[f64], k: usize) -> f64 {
        let n = x.len() as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (i, v) in x.iter().enumerate() {
            let a = -2.0 * PI * k as f64 * i as f64 / n;
            re += v * a.cos();
            im += v * a.sin();
        }
        re.hypot(im)
    }

    #[test]
    fn round_trip_preserves_tone_rms() {
        for (a, b) in [(44100, 22050), (48000, 22050), (22050, 16000)] {
            let x = tone(997.0, 0.6, a, 1.0);
            let back = resample(&resample(&x, b), a);
            // skip the kernel's edge transients
            let m = back.len() / 5;
            let got = rms(&back.samples()[m..back.len() - m]);
            let want = rms(&x.samples()[m..x.len() - m]);
            assert!((got / want - 1.0).abs() < 0.01, "{a}->{b}: {got} vs {want}");
        }
    }
}
