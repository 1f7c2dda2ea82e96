//! The seven mid-level perceptual features and the providers that supply
//! them per analysis window.
//!
//! No neural predictor ships here: features come from a constant vector or
//! from a time-stamped CSV trace produced elsewhere.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::io::write_atomic;

/// Canonical order of the mid-level features.
pub const MIDLEVEL_NAMES: [&str; 7] = [
    "melodiousness",
    "articulation",
    "rhythm_complexity",
    "rhythm_stability",
    "dissonance",
    "tonal_stability",
    "minorness",
];

/// Seven finite mid-level feature values in canonical order. Values are
/// passed through without rescaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidLevelVector([f64; 7]);

impl MidLevelVector {
    pub fn new(values: [f64; 7]) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature(MIDLEVEL_NAMES[i].into()));
        }
        Ok(Self(values))
    }

    pub fn splat(v: f64) -> Result<Self> {
        Self::new([v; 7])
    }

    pub fn values(&self) -> &[f64; 7] {
        &self.0
    }

    pub fn melodiousness(&self) -> f64 {
        self.0[0]
    }
    pub fn articulation(&self) -> f64 {
        self.0[1]
    }
    pub fn rhythm_complexity(&self) -> f64 {
        self.0[2]
    }
    pub fn rhythm_stability(&self) -> f64 {
        self.0[3]
    }
    pub fn dissonance(&self) -> f64 {
        self.0[4]
    }
    pub fn tonal_stability(&self) -> f64 {
        self.0[5]
    }
    pub fn minorness(&self) -> f64 {
        self.0[6]
    }

    fn lerp(&self, other: &Self, w: f64) -> Self {
        let mut out = [0.0; 7];
        for (o, (a, b)) in out.iter_mut().zip(self.0.iter().zip(&other.0)) {
            *o = a + (b - a) * w;
        }
        Self(out)
    }
}

/// Time-stamped mid-level vectors with strictly increasing timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct MidLevelTrace {
    timestamps: Vec<f64>,
    vectors: Vec<MidLevelVector>,
}

impl MidLevelTrace {
    pub fn new(timestamps: Vec<f64>, vectors: Vec<MidLevelVector>) -> Result<Self> {
        if timestamps.len() != vectors.len() {
            return Err(Error::InvalidParameter(
                "timestamps and vectors differ in length".into(),
            ));
        }
        if timestamps.is_empty() {
            return Err(Error::InvalidParameter("empty mid-level trace".into()));
        }
        if timestamps.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("non-finite timestamp".into()));
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(format!(
                "timestamps not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self {
            timestamps,
            vectors,
        })
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn vectors(&self) -> &[MidLevelVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    /// Piecewise-linear value at `t`, clamped to the end vectors outside the trace.
    pub fn at(&self, t: f64) -> MidLevelVector {
        let ts = &self.timestamps;
        if t <= ts[0] {
            return self.vectors[0];
        }
        let last = ts.len() - 1;
        if t >= ts[last] {
            return self.vectors[last];
        }
        // first index with ts[i] > t; i >= 1
        let i = ts.partition_point(|&x| x <= t);
        let (t0, t1) = (ts[i - 1], ts[i]);
        if t == t0 {
            return self.vectors[i - 1];
        }
        self.vectors[i - 1].lerp(&self.vectors[i], (t - t0) / (t1 - t0))
    }
}

/// Supplies mid-level features for the analysis window `[t_start, t_end)`.
///
/// Implementations must be deterministic and safe to share across threads.
pub trait MidLevelProvider: Send + Sync {
    fn window_features(&self, t_start: f64, t_end: f64) -> Result<MidLevelVector>;

    fn describe(&self) -> String;
}

/// Returns the same vector for every window.
#[derive(Debug, Clone)]
pub struct ConstantProvider(pub MidLevelVector);

impl MidLevelProvider for ConstantProvider {
    fn window_features(&self, t_start: f64, t_end: f64) -> Result<MidLevelVector> {
        check_window(t_start, t_end)?;
        Ok(self.0)
    }

    fn describe(&self) -> String {
        let v: Vec<String> = self.0.values().iter().map(f64::to_string).collect();
        format!("constant:{}", v.join(","))
    }
}

/// Interpolates a recorded trace at each window's midpoint.
#[derive(Debug, Clone)]
pub struct TraceProvider {
    trace: MidLevelTrace,
    source: Option<PathBuf>,
}

impl TraceProvider {
    pub fn new(trace: MidLevelTrace) -> Self {
        Self {
            trace,
            source: None,
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Ok(Self {
            trace: load_midlevel_trace(path)?,
            source: Some(path.into()),
        })
    }

    pub fn trace(&self) -> &MidLevelTrace {
        &self.trace
    }
}

impl MidLevelProvider for TraceProvider {
    fn window_features(&self, t_start: f64, t_end: f64) -> Result<MidLevelVector> {
        check_window(t_start, t_end)?;
        Ok(self.trace.at(0.5 * (t_start + t_end)))
    }

    fn describe(&self) -> String {
        match &self.source {
            Some(p) => format!("trace:{}", p.display()),
            None => "trace:<memory>".into(),
        }
    }
}

fn check_window(t_start: f64, t_end: f64) -> Result<()> {
    if t_start < t_end {
        Ok(())
    } else {
        Err(Error::Provider(format!(
            "empty window [{t_start}, {t_end})"
        )))
    }
}

/// Parses `constant:<v1,...,v7>` or `trace:<path>`.
pub fn parse_provider(spec: &str) -> Result<Box<dyn MidLevelProvider>> {
    if let Some(values) = spec.strip_prefix("constant:") {
        let parsed: Vec<f64> = values
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Provider(format!("'{v}' is not a number")))
            })
            .collect::<Result<_>>()?;
        let arr: [f64; 7] = parsed.try_into().map_err(|v: Vec<f64>| {
            Error::Provider(format!("constant provider needs 7 values, got {}", v.len()))
        })?;
        Ok(Box::new(ConstantProvider(MidLevelVector::new(arr)?)))
    } else if let Some(path) = spec.strip_prefix("trace:") {
        Ok(Box::new(TraceProvider::from_file(path)?))
    } else {
        Err(Error::Provider(format!(
            "unknown provider '{spec}' (expected constant:<v1,...,v7> or trace:<path>)"
        )))
    }
}

/// Reads a CSV with a `time_s` column plus the seven canonical feature
/// columns, in any order. Row numbers in errors count the header as row 1.
pub fn load_midlevel_trace(path: impl AsRef<Path>) -> Result<MidLevelTrace> {
    let path = path.as_ref();
    let label = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(&label, e))?;
    let headers = reader.headers().map_err(|e| csv_error(&label, e))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn {
                path: label.clone(),
                column: name.into(),
            })
    };
    let time_col = column("time_s")?;
    let feature_cols: Vec<usize> = MIDLEVEL_NAMES
        .iter()
        .map(|n| column(n))
        .collect::<Result<_>>()?;

    let mut timestamps = Vec::new();
    let mut vectors = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| csv_error(&label, e))?;
        let field = |col: usize, name: &str| -> Result<f64> {
            let raw = record.get(col).unwrap_or("");
            let v: f64 = raw.parse().map_err(|_| Error::Row {
                path: label.clone(),
                row,
                reason: format!("{name}: cannot parse '{raw}'"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Row {
                    path: label.clone(),
                    row,
                    reason: format!("{name}: non-finite value"),
                })
            }
        };
        let t = field(time_col, "time_s")?;
        if let Some(&prev) = timestamps.last() {
            if t <= prev {
                return Err(Error::Row {
                    path: label,
                    row,
                    reason: format!("time_s {t} does not increase (previous {prev})"),
                });
            }
        }
        let mut values = [0.0; 7];
        for (slot, (&col, name)) in values.iter_mut().zip(feature_cols.iter().zip(MIDLEVEL_NAMES)) {
            *slot = field(col, name)?;
        }
        timestamps.push(t);
        vectors.push(MidLevelVector(values));
    }
    MidLevelTrace::new(timestamps, vectors).map_err(|e| match e {
        Error::InvalidParameter(reason) => Error::Row {
            path: label,
            row: 1,
            reason,
        },
        other => other,
    })
}

pub fn save_midlevel_trace(trace: &MidLevelTrace, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("time_s");
    for n in MIDLEVEL_NAMES {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (t, v) in trace.timestamps.iter().zip(&trace.vectors) {
        out.push_str(&t.to_string());
        for x in v.values() {
            out.push(',');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

fn csv_error(path: &str, e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Row {
            path: path.into(),
            row,
            reason: format!("{other:?}"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    const HEADER: &str = "time_s,melodiousness,articulation,rhythm_complexity,rhythm_stability,dissonance,tonal_stability,minorness";

    #[test]
    fn constant_provider_ignores_window() {
        let v = MidLevelVector::new([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap();
        let p = ConstantProvider(v);
        assert_eq!(p.window_features(0.0, 5.0).unwrap(), v);
        assert_eq!(p.window_features(100.0, 115.0).unwrap(), v);
        assert!(p.window_features(5.0, 5.0).is_err());
    }

    #[test]
    fn midpoint_interpolation() {
        let trace = MidLevelTrace::new(
            vec![0.0, 10.0],
            vec![MidLevelVector::splat(0.0).unwrap(), MidLevelVector::splat(1.0).unwrap()],
        )
        .unwrap();
        let p = TraceProvider::new(trace);
        let v = p.window_features(4.0, 6.0).unwrap();
        assert!(v.values().iter().all(|&x| (x - 0.5).abs() < 1e-15));
        // before the first timestamp: clamp
        assert_eq!(p.window_features(-8.0, -3.0).unwrap(), MidLevelVector::splat(0.0).unwrap());
        assert_eq!(p.window_features(20.0, 25.0).unwrap(), MidLevelVector::splat(1.0).unwrap());
    }

    #[test]
    fn loads_two_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "t.csv",
            &format!("{HEADER}\n0,1,2,3,4,5,6,7\n1.5,0,0,0,0,0,0,0.25\n"),
        );
        let t = load_midlevel_trace(&p).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.vectors()[0].minorness(), 7.0);
        assert_eq!(t.vectors()[1].minorness(), 0.25);
    }

    #[test]
    fn reordered_columns_parse_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "t.csv",
            "minorness,time_s,dissonance,melodiousness,tonal_stability,articulation,rhythm_stability,rhythm_complexity\n7,0,5,1,6,2,4,3\n",
        );
        let t = load_midlevel_trace(&p).unwrap();
        assert_eq!(t.vectors()[0].values(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        assert_eq!(t.timestamps(), &[0.0]);
    }

    #[test]
    fn non_monotonic_names_row_three() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "t.csv",
            &format!("{HEADER}\n5.0,0,0,0,0,0,0,0\n3.0,0,0,0,0,0,0,0\n"),
        );
        match load_midlevel_trace(&p).unwrap_err() {
            Error::Row { row, .. } => assert_eq!(row, 3),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rejects_missing_column_and_nan() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "time_s,melodiousness\n0,1\n");
        assert!(matches!(
            load_midlevel_trace(&p).unwrap_err(),
            Error::MissingColumn { column, .. } if column == "articulation"
        ));
        let p = write(&dir, "b.csv", &format!("{HEADER}\n0,1,2,NaN,4,5,6,7\n"));
        assert!(matches!(load_midlevel_trace(&p).unwrap_err(), Error::Row { row: 2, .. }));
        let p = write(&dir, "c.csv", &format!("{HEADER}\n0,1,2,x,4,5,6,7\n"));
        assert!(matches!(load_midlevel_trace(&p).unwrap_err(), Error::Row { row: 2, .. }));
    }

    #[test]
    fn provider_spec_parsing() {
        let p = parse_provider("constant:1,2,3,4,5,6,7").unwrap();
        assert_eq!(p.window_features(0.0, 1.0).unwrap().dissonance(), 5.0);
        assert!(parse_provider("constant:1,2").is_err());
        assert!(parse_provider("neural:resnet").is_err());
        assert!(parse_provider("trace:/no/such/file.csv").is_err());
    }

    fn arb_trace() -> impl Strategy<Value = MidLevelTrace> {
        proptest::collection::vec((0.001f64..3.0, proptest::array::uniform7(-5.0f64..5.0)), 1..20)
            .prop_map(|rows| {
                let mut t = 0.0;
                let mut ts = Vec::new();
                let mut vs = Vec::new();
                for (dt, v) in rows {
                    t += dt;
                    ts.push(t);
                    vs.push(MidLevelVector::new(v).unwrap());
                }
                MidLevelTrace::new(ts, vs).unwrap()
            })
    }

    proptest! {
        #[test]
        fn exact_timestamps_return_rows(trace in arb_trace()) {
            for (t, v) in trace.timestamps().iter().zip(trace.vectors()) {
                prop_assert_eq!(trace.at(*t), *v);
            }
        }

        #[test]
        fn save_load_round_trip(trace in arb_trace()) {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("trace.csv");
            save_midlevel_trace(&trace, &p).unwrap();
            prop_assert_eq!(load_midlevel_trace(&p).unwrap(), trace);
        }

        #[test]
        fn provider_is_midpoint_lerp(trace in arb_trace(), a in -2.0f64..40.0, w in 0.01f64..10.0) {
            let p = TraceProvider::new(trace.clone());
            let got = p.window_features(a, a + w).unwrap();
            let mid = 0.5 * (a + (a + w));
            prop_assert_eq!(got, trace.at(mid));
        }
    }
}
