use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::regression::Prediction;

use super::nearest_emotion_word;

/// A prediction stamped with the end time of the audio it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmotionPoint {
    pub t: f64,
    pub valence: f64,
    pub arousal: f64,
}

impl EmotionPoint {
    pub fn new(t: f64, valence: f64, arousal: f64) -> Result<Self> {
        let p = Self { t, valence, arousal };
        p.check()?;
        Ok(p)
    }

    pub fn at(t: f64, prediction: Prediction) -> Self {
        Self {
            t,
            valence: prediction.valence,
            arousal: prediction.arousal,
        }
    }

    fn check(&self) -> Result<()> {
        let ok = self.t.is_finite()
            && self.valence.is_finite()
            && self.arousal.is_finite()
            && self.valence.abs() <= 1.0
            && self.arousal.abs() <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid emotion point {self:?}")))
        }
    }

    pub fn word(&self) -> &'static str {
        nearest_emotion_word(self.valence, self.arousal).as_str()
    }
}

/// Time-ordered points with strictly increasing `t`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmotionTrace {
    pub points: Vec<EmotionPoint>,
    pub source_id: String,
    pub smoothed: bool,
}

impl EmotionTrace {
    pub fn new(points: Vec<EmotionPoint>, source_id: impl Into<String>) -> Result<Self> {
        for p in &points {
            p.check()?;
        }
        if let Some(i) = points.windows(2).position(|w| w[1].t <= w[0].t) {
            return Err(Error::InvalidParameter(format!(
                "trace times not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self {
            points,
            source_id: source_id.into(),
            smoothed: false,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn records(&self) -> Vec<TraceRecord> {
        self.points
            .iter()
            .map(|p| TraceRecord {
                t: p.t,
                valence: p.valence,
                arousal: p.arousal,
                word: p.word().to_string(),
                smoothed: self.smoothed,
            })
            .collect()
    }

    /// Points of the records carrying the given `smoothed` flag.
    pub fn from_records(
        records: &[TraceRecord],
        smoothed: bool,
        source_id: impl Into<String>,
    ) -> Result<Self> {
        let points = records
            .iter()
            .filter(|r| r.smoothed == smoothed)
            .map(|r| EmotionPoint::new(r.t, r.valence, r.arousal))
            .collect::<Result<Vec<_>>>()?;
        let mut trace = Self::new(points, source_id)?;
        trace.smoothed = smoothed;
        Ok(trace)
    }
}

/// One line of trace output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub valence: f64,
    pub arousal: f64,
    pub word: String,
    pub smoothed: bool,
}

/// One JSON object per line, traces in the given order.
pub fn write_trace_jsonl(path: impl AsRef<Path>, traces: &[&EmotionTrace]) -> Result<()> {
    let mut out = String::new();
    for trace in traces {
        for r in trace.records() {
            out.push_str(&serde_json::to_string(&r).expect("trace records serialize"));
            out.push('\n');
        }
    }
    write_atomic(path, out.as_bytes())
}

/// CSV with header `t,valence,arousal,word,smoothed`.
pub fn write_trace_csv(path: impl AsRef<Path>, traces: &[&EmotionTrace]) -> Result<()> {
    let mut out = String::from("t,valence,arousal,word,smoothed\n");
    for trace in traces {
        for r in trace.records() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.t, r.valence, r.arousal, r.word, r.smoothed
            ));
        }
    }
    write_atomic(path, out.as_bytes())
}

/// Reads records from a `.csv` file or a JSON-lines file (any other extension).
pub fn read_trace_records(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>> {
    let path = path.as_ref();
    let label = path.display().to_string();
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Row {
            path: label.clone(),
            row: 1,
            reason: e.to_string(),
        })?;
        reader
            .deserialize()
            .enumerate()
            .map(|(i, r)| {
                r.map_err(|e| Error::Row {
                    path: label.clone(),
                    row: i + 2,
                    reason: e.to_string(),
                })
            })
            .collect()
    } else {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| Error::Row {
                    path: label.clone(),
                    row: i + 1,
                    reason: e.to_string(),
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace() -> EmotionTrace {
        EmotionTrace::new(
            vec![
                EmotionPoint::new(5.0, 0.5, 0.5).unwrap(),
                EmotionPoint::new(6.0, -0.25, 0.75).unwrap(),
                EmotionPoint::new(7.0, 0.0, 0.0).unwrap(),
            ],
            "t",
        )
        .unwrap()
    }

    #[test]
    fn rejects_unordered_and_out_of_range() {
        let p = EmotionPoint::new(1.0, 0.0, 0.0).unwrap();
        assert!(EmotionTrace::new(vec![p, p], "x").is_err());
        assert!(EmotionPoint::new(0.0, 1.5, 0.0).is_err());
    }

    #[test]
    fn jsonl_and_csv_round_trip_with_flags() {
        let raw = trace();
        let mut smooth = trace();
        smooth.smoothed = true;
        let dir = tempfile::tempdir().unwrap();
        for name in ["t.jsonl", "t.csv"] {
            let p = dir.path().join(name);
            if name.ends_with("csv") {
                write_trace_csv(&p, &[&raw, &smooth]).unwrap();
            } else {
                write_trace_jsonl(&p, &[&raw, &smooth]).unwrap();
            }
            let recs = read_trace_records(&p).unwrap();
            assert_eq!(recs.len(), 6);
            assert_eq!(recs[0].word, "excited");
            assert_eq!(recs[2].word, "neutral");
            let back = EmotionTrace::from_records(&recs, false, "t").unwrap();
            assert_eq!(back.points, raw.points);
            assert!(EmotionTrace::from_records(&recs, true, "t").unwrap().smoothed);
        }
    }

    #[test]
    fn jsonl_field_names() {
        let line = serde_json::to_string(&trace().records()[0]).unwrap();
        assert_eq!(
            line,
            r#"{"t":5.0,"valence":0.5,"arousal":0.5,"word":"excited","smoothed":false}"#
        );
    }
}
