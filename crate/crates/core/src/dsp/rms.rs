use crate::audio::{AudioBuffer, FrameSpec};

/// Framed RMS amplitude: `RMS_k = sqrt(mean(frame_k^2))` over rectangular frames.
#[derive(Debug, Clone, PartialEq)]
pub struct RmsTrace {
    pub values: Vec<f64>,
    pub frame_spec: FrameSpec,
    /// Center of each frame, seconds.
    pub frame_times: Vec<f64>,
}

impl RmsTrace {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn rms_trace(buf: &AudioBuffer, spec: FrameSpec) -> RmsTrace {
    let rate = f64::from(buf.sample_rate());
    let tau = spec.frame_length() as f64;
    let values = buf
        .frames(spec)
        .map(|frame| (frame.iter().map(|x| x * x).sum::<f64>() / tau).sqrt())
        .collect::<Vec<_>>();
    let frame_times = (0..values.len())
        .map(|k| (spec.frame_start(k) as f64 + tau / 2.0) / rate)
        .collect();
    RmsTrace {
        values,
        frame_spec: spec,
        frame_times,
    }
}

/// Mean of the RMS values whose frame centers lie in `[t_start, t_end)`;
/// 0.0 when no frame falls inside.
pub fn mean_rms(trace: &RmsTrace, t_start: f64, t_end: f64) -> f64 {
    let (sum, count) = trace
        .values
        .iter()
        .zip(&trace.frame_times)
        .filter(|(_, &t)| t >= t_start && t < t_end)
        .fold((0.0, 0usize), |(s, c), (v, _)| (s + v, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn spec() -> FrameSpec {
        FrameSpec::new(2048, 512).unwrap()
    }

    #[test]
    fn zero_and_constant() {
        let z = rms_trace(&AudioBuffer::silence(10000, 22050), spec());
        assert_eq!(z.len(), spec().frame_count(10000));
        assert!(z.values.iter().all(|&v| v == 0.0));

        let c = AudioBuffer::new(vec![0.25; 10000], 22050).unwrap();
        let t = rms_trace(&c, spec());
        assert!(t.values.iter().all(|&v| (v - 0.25).abs() < 1e-12));
    }

    #[test]
    fn integer_period_sine() {
        // 2048-sample frame holds exactly 16 periods of a 128-sample sine
        let x: Vec<f64> = (0..8192)
            .map(|i| 0.8 * (2.0 * PI * i as f64 / 128.0).sin())
            .collect();
        let t = rms_trace(&AudioBuffer::new(x, 22050).unwrap(), spec());
        let expected = 0.8 / 2f64.sqrt();
        assert!(t.values.iter().all(|&v| (v - expected).abs() < 1e-6));
    }

    #[test]
    fn frame_times_are_centers() {
        let t = rms_trace(&AudioBuffer::silence(4096, 22050), spec());
        assert_eq!(t.frame_times[0], 1024.0 / 22050.0);
        assert_eq!(t.frame_times[1], (512.0 + 1024.0) / 22050.0);
    }

    #[test]
    fn shorter_than_frame_is_empty() {
        assert!(rms_trace(&AudioBuffer::silence(100, 22050), spec()).is_empty());
    }

    #[test]
    fn mean_rms_windows() {
        let spec = FrameSpec::new(4, 4).unwrap();
        let mut x = vec![0.2; 40];
        x.extend(vec![0.4; 40]);
        let t = rms_trace(&AudioBuffer::new(x, 8).unwrap(), spec);
        assert!((mean_rms(&t, 0.0, 10.0) - 0.3).abs() < 1e-12);
        assert_eq!(mean_rms(&t, -5.0, 0.0), 0.0);

        let constant = rms_trace(&AudioBuffer::new(vec![0.3; 64], 8).unwrap(), spec);
        assert!((mean_rms(&constant, 1.0, 5.0) - 0.3).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn scaling_equivariance(seed in proptest::collection::vec(-1.0f64..1.0, 300..1200), c in 0.0f64..1.0) {
            let spec = FrameSpec::new(64, 16).unwrap();
            let x = AudioBuffer::new(seed.clone(), 8000).unwrap();
            let y = AudioBuffer::new(seed.iter().map(|v| v * c).collect(), 8000).unwrap();
            let a = rms_trace(&x, spec);
            let b = rms_trace(&y, spec);
            for (p, q) in a.values.iter().zip(&b.values) {
                prop_assert!((c * p - q).abs() <= 1e-9);
            }
        }

        #[test]
        fn full_range_mean_is_mean_of_values(seed in proptest::collection::vec(-1.0f64..1.0, 64..600)) {
            let spec = FrameSpec::new(32, 8).unwrap();
            let buf = AudioBuffer::new(seed, 1000).unwrap();
            let t = rms_trace(&buf, spec);
            prop_assume!(!t.is_empty());
            let direct = t.values.iter().sum::<f64>() / t.len() as f64;
            prop_assert_eq!(mean_rms(&t, 0.0, buf.duration_seconds()), direct);
        }
    }
}
