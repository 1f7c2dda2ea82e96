use crate::error::{Error, Result};

/// Analysis window length and hop, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub window: f64,
    pub hop: f64,
}

impl WindowSpec {
    pub fn new(window: f64, hop: f64) -> Result<Self> {
        if !(window > 0.0 && hop > 0.0 && hop <= window && window.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "window spec needs 0 < hop ({hop}) <= window ({window})"
            )));
        }
        Ok(Self { window, hop })
    }

    /// 5 s windows every second.
    pub fn dynamic() -> Self {
        Self {
            window: 5.0,
            hop: 1.0,
        }
    }

    /// 15 s windows every 5 s.
    pub fn static_mode() -> Self {
        Self {
            window: 15.0,
            hop: 5.0,
        }
    }

    pub fn window_samples(&self, sample_rate: u32) -> usize {
        (self.window * f64::from(sample_rate)).round() as usize
    }

    pub fn hop_samples(&self, sample_rate: u32) -> usize {
        ((self.hop * f64::from(sample_rate)).round() as usize).max(1)
    }
}

/// `(start, end)` sample ranges of every complete window in a signal of
/// `len` samples: `floor((len − W) / H) + 1` windows, none if `len < W`.
pub fn dynamic_windows(len: usize, sample_rate: u32, spec: WindowSpec) -> Vec<(usize, usize)> {
    let w = spec.window_samples(sample_rate);
    let h = spec.hop_samples(sample_rate);
    if len < w || w == 0 {
        return Vec::new();
    }
    (0..=(len - w) / h).map(|k| (k * h, k * h + w)).collect()
}

/// Start samples of the static-mode windows: multiples of the hop with
/// `start + window <= len`. Signals shorter than one window yield `[0]`
/// (they are looped to length first).
pub fn static_window_starts(len: usize, sample_rate: u32, spec: WindowSpec) -> Vec<usize> {
    let w = spec.window_samples(sample_rate);
    if len <= w {
        return vec![0];
    }
    dynamic_windows(len, sample_rate, spec)
        .into_iter()
        .map(|(s, _)| s)
        .collect()
}
