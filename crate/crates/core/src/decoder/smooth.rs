use crate::error::{Error, Result};

use super::{EmotionPoint, EmotionTrace};

/// Exponential approach toward the latest raw point, rendered at a fixed rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingSpec {
    /// Rendered points per second.
    pub render_rate: f64,
    /// Seconds for the remaining distance to the target to halve.
    pub half_life: f64,
}

impl Default for SmoothingSpec {
    fn default() -> Self {
        Self {
            render_rate: 30.0,
            half_life: 0.35,
        }
    }
}

impl SmoothingSpec {
    pub fn new(render_rate: f64, half_life: f64) -> Result<Self> {
        if !(render_rate > 0.0 && half_life > 0.0 && render_rate.is_finite() && half_life.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "smoothing needs positive render rate ({render_rate}) and half-life ({half_life})"
            )));
        }
        Ok(Self {
            render_rate,
            half_life,
        })
    }
}

/// Renders `trace` at `spec.render_rate` from its first to its last time.
///
/// At each render tick `r ← p + (r − p)·2^(−Δt/half_life)`, where `p` is the
/// latest raw point at or before the tick and `r` starts at the first raw
/// point.
pub fn smooth(trace: &EmotionTrace, spec: SmoothingSpec) -> EmotionTrace {
    let Some(first) = trace.points.first() else {
        return EmotionTrace {
            smoothed: true,
            ..trace.clone()
        };
    };
    let last_t = trace.points.last().map_or(first.t, |p| p.t);
    let dt = 1.0 / spec.render_rate;
    let decay = (-dt / spec.half_life).exp2();
    let ticks = ((last_t - first.t) * spec.render_rate + 1e-9).floor() as usize;

    let (mut v, mut a) = (first.valence, first.arousal);
    let mut target = 0;
    let mut points = Vec::with_capacity(ticks + 1);
    for i in 0..=ticks {
        let t = first.t + i as f64 / spec.render_rate;
        while target + 1 < trace.points.len() && trace.points[target + 1].t <= t + 1e-12 {
            target += 1;
        }
        let p = trace.points[target];
        v = approach(v, p.valence, decay);
        a = approach(a, p.arousal, decay);
        points.push(EmotionPoint {
            t,
            valence: v,
            arousal: a,
        });
    }
    EmotionTrace {
        points,
        source_id: trace.source_id.clone(),
        smoothed: true,
    }
}

/// One decay step from `current` toward `target`, never leaving the
/// segment between them.
fn approach(current: f64, target: f64, decay: f64) -> f64 {
    let next = target + (current - target) * decay;
    next.clamp(current.min(target), current.max(target))
}
