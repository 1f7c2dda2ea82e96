use super::Spectrogram;

/// Novelty curve, one value per spectrogram frame.
#[derive(Debug, Clone, PartialEq)]
pub struct OnsetDetectionFunction {
    pub values: Vec<f64>,
    pub frame_rate: f64,
    /// Time of frame 0, seconds.
    pub first_frame_time: f64,
}

impl OnsetDetectionFunction {
    pub fn frame_time(&self, t: usize) -> f64 {
        self.first_frame_time + t as f64 / self.frame_rate
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperFluxParams {
    /// Frames between the compared spectra.
    pub lag: usize,
    /// Width of the maximum filter across bins; odd.
    pub max_width: usize,
}

impl Default for SuperFluxParams {
    fn default() -> Self {
        Self {
            lag: 2,
            max_width: 3,
        }
    }
}

/// Positive log-magnitude flux against a bin-wise maximum-filtered,
/// `lag`-frames-old spectrum:
///
/// `odf[t] = Σ_b max(0, L[t,b] − maxfilt(L)[t−lag,b])`, `L = ln(1 + |X|)`.
///
/// The first `lag` frames are 0.
pub fn superflux_odf(spec: &Spectrogram, params: SuperFluxParams) -> OnsetDetectionFunction {
    assert!(params.lag >= 1, "lag must be at least one frame");
    assert!(params.max_width % 2 == 1, "max filter width must be odd");
    let n_bins = spec.n_bins();
    let radius = params.max_width / 2;

    let log_rows: Vec<Vec<f64>> = (0..spec.n_frames())
        .map(|t| spec.frame(t).iter().map(|m| m.ln_1p()).collect())
        .collect();
    let filtered: Vec<Vec<f64>> = log_rows
        .iter()
        .map(|row| {
            (0..n_bins)
                .map(|b| {
                    let lo = b.saturating_sub(radius);
                    let hi = (b + radius).min(n_bins - 1);
                    row[lo..=hi].iter().copied().fold(f64::NEG_INFINITY, f64::max)
                })
                .collect()
        })
        .collect();

    let values = (0..log_rows.len())
        .map(|t| {
            if t < params.lag {
                return 0.0;
            }
            log_rows[t]
                .iter()
                .zip(&filtered[t - params.lag])
                .map(|(cur, prev)| (cur - prev).max(0.0))
                .sum()
        })
        .collect();

    OnsetDetectionFunction {
        values,
        frame_rate: spec.frame_rate(),
        first_frame_time: spec.first_frame_time(),
    }
}

/// Peak-picking windows in seconds plus the detection threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakPickParams {
    pub pre_max: f64,
    pub post_max: f64,
    pub pre_avg: f64,
    pub post_avg: f64,
    /// Threshold above the local mean, as a fraction of the ODF maximum.
    pub delta_rel: f64,
    /// Lower bound on the threshold, in ODF units.
    pub delta_floor: f64,
    /// Minimum inter-onset interval.
    pub min_ioi: f64,
}

impl Default for PeakPickParams {
    fn default() -> Self {
        Self {
            pre_max: 0.03,
            post_max: 0.03,
            pre_avg: 0.10,
            post_avg: 0.07,
            delta_rel: 0.05,
            delta_floor: 1.0,
            min_ioi: 0.03,
        }
    }
}

impl PeakPickParams {
    fn validate(&self) {
        let all = [
            self.pre_max,
            self.post_max,
            self.pre_avg,
            self.post_avg,
            self.delta_rel,
            self.delta_floor,
            self.min_ioi,
        ];
        assert!(
            all.iter().all(|v| v.is_finite() && *v >= 0.0),
            "peak-picking parameters must be finite and non-negative"
        );
    }
}

/// Onset times in seconds, strictly increasing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OnsetList {
    pub onset_times: Vec<f64>,
}

impl OnsetList {
    pub fn len(&self) -> usize {
        self.onset_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.onset_times.is_empty()
    }
}

/// Frame `t` is an onset when it is the local maximum over
/// `[t − pre_max, t + post_max]`, exceeds the local mean over
/// `[t − pre_avg, t + post_avg]` by the threshold, is strictly positive,
/// and lies at least `min_ioi` after the previous onset.
pub fn pick_onsets(odf: &OnsetDetectionFunction, params: PeakPickParams) -> OnsetList {
    params.validate();
    let v = &odf.values;
    let n = v.len();
    let frames = |s: f64| (s * odf.frame_rate).round() as usize;
    let (pre_max, post_max) = (frames(params.pre_max), frames(params.post_max));
    let (pre_avg, post_avg) = (frames(params.pre_avg), frames(params.post_avg));
    let min_ioi = frames(params.min_ioi);
    let delta = (params.delta_rel * odf.max()).max(params.delta_floor);

    let mut onsets = Vec::new();
    let mut last: Option<usize> = None;
    for t in 0..n {
        if v[t] <= 0.0 {
            continue;
        }
        let lo = t.saturating_sub(pre_max);
        let hi = (t + post_max).min(n - 1);
        if v[lo..=hi].iter().any(|&x| x > v[t]) {
            continue;
        }
        let lo = t.saturating_sub(pre_avg);
        let hi = (t + post_avg).min(n - 1);
        let mean = v[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64;
        if v[t] < mean + delta {
            continue;
        }
        if let Some(prev) = last {
            if t - prev < min_ioi {
                continue;
            }
        }
        last = Some(t);
        onsets.push(odf.frame_time(t));
    }
    OnsetList {
        onset_times: onsets,
    }
}

/// Onsets per second in `[t_start, t_end)`.
pub fn onset_density(onsets: &OnsetList, t_start: f64, t_end: f64) -> f64 {
    assert!(t_start < t_end, "empty density window");
    let count = onsets
        .onset_times
        .iter()
        .filter(|&&t| t >= t_start && t < t_end)
        .count();
    count as f64 / (t_end - t_start)
}
