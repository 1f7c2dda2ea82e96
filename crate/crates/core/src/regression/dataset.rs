use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::write_atomic;

use super::{FeatureVector, FEATURE_NAMES};

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub clip_id: String,
    pub features: FeatureVector,
    pub arousal: f64,
    pub valence: f64,
}

/// Per-clip feature vectors with their arousal/valence ratings. Clip ids
/// are unique.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    rows: Vec<DatasetRow>,
}

impl Dataset {
    pub fn new(rows: Vec<DatasetRow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, r) in rows.iter().enumerate() {
            if !seen.insert(r.clip_id.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate clip_id '{}' at index {i}",
                    r.clip_id
                )));
            }
            r.features.check_finite()?;
            if !r.arousal.is_finite() || !r.valence.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite rating for clip '{}'",
                    r.clip_id
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[DatasetRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

const ID_COLUMN: &str = "clip_id";
const TARGETS: [&str; 2] = ["arousal", "valence"];

/// Reads a dataset CSV: `clip_id`, the nine feature columns, `arousal`,
/// `valence`, in any column order. Row numbers count the header as row 1.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let label = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| Error::Row {
            path: label.clone(),
            row: 1,
            reason: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn {
                path: label.clone(),
                column: name.into(),
            })
    };
    let id_col = column(ID_COLUMN)?;
    let feature_cols: Vec<usize> = FEATURE_NAMES.iter().map(|n| column(n)).collect::<Result<_>>()?;
    let target_cols: Vec<usize> = TARGETS.iter().map(|n| column(n)).collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::Row {
            path: label.clone(),
            row,
            reason: e.to_string(),
        })?;
        let err = |reason: String| Error::Row {
            path: label.clone(),
            row,
            reason,
        };
        let number = |col: usize, name: &str| -> Result<f64> {
            let raw = record.get(col).unwrap_or("");
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(err(format!("{name}: non-finite value"))),
                Err(_) => Err(err(format!("{name}: cannot parse '{raw}'"))),
            }
        };
        let clip_id = record.get(id_col).unwrap_or("").to_string();
        if clip_id.is_empty() {
            return Err(err("empty clip_id".into()));
        }
        if !seen.insert(clip_id.clone()) {
            return Err(err(format!("duplicate clip_id '{clip_id}'")));
        }
        let mut features = [0.0; 9];
        for (slot, (&col, name)) in features.iter_mut().zip(feature_cols.iter().zip(FEATURE_NAMES)) {
            *slot = number(col, name)?;
        }
        rows.push(DatasetRow {
            clip_id,
            features: FeatureVector(features),
            arousal: number(target_cols[0], TARGETS[0])?,
            valence: number(target_cols[1], TARGETS[1])?,
        });
    }
    Dataset::new(rows)
}

pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut out = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let mut header = vec![ID_COLUMN];
        header.extend(FEATURE_NAMES);
        header.extend(TARGETS);
        w.write_record(&header).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        for r in &ds.rows {
            let mut rec = vec![r.clip_id.clone()];
            rec.extend(r.features.0.iter().map(f64::to_string));
            rec.push(r.arousal.to_string());
            rec.push(r.valence.to_string());
            w.write_record(&rec).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::io(path.as_ref(), e))?;
    }
    write_atomic(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "clip_id,melodiousness,articulation,rhythm_complexity,rhythm_stability,dissonance,tonal_stability,minorness,onset_density,mean_rms,arousal,valence";

    #[test]
    fn round_trip() {
        let rows = (0..3)
            .map(|i| DatasetRow {
                clip_id: format!("c{i}"),
                features: FeatureVector([i as f64 * 0.1; 9]),
                arousal: 0.5 - i as f64,
                valence: 1.0 / 3.0,
            })
            .collect();
        let ds = Dataset::new(rows).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        save_dataset(&ds, &p).unwrap();
        assert_eq!(load_dataset(&p).unwrap(), ds);
    }

    #[test]
    fn errors_carry_row_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        std::fs::write(
            &p,
            format!("{HEADER}\na,1,1,1,1,1,1,1,1,1,1,1\nb,1,1,1,1,1,1,1,oops,1,1,1\n"),
        )
        .unwrap();
        let e = load_dataset(&p).unwrap_err();
        assert!(matches!(e, Error::Row { row: 3, .. }), "{e}");
        assert!(e.to_string().contains("onset_density"));

        std::fs::write(
            &p,
            format!("{HEADER}\na,1,1,1,1,1,1,1,1,1,1,1\na,1,1,1,1,1,1,1,1,1,1,1\n"),
        )
        .unwrap();
        assert!(matches!(load_dataset(&p).unwrap_err(), Error::Row { row: 3, .. }));

        std::fs::write(&p, "clip_id,arousal,valence\n").unwrap();
        assert!(matches!(load_dataset(&p).unwrap_err(), Error::MissingColumn { .. }));
    }
}
