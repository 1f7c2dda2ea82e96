use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::write_atomic;

use super::{fit_ols_named, Dataset, FeatureSubset, FeatureVector, OlsFit};

pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// Affine map applied to raw predictions before clamping to `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub arousal_scale: f64,
    pub arousal_offset: f64,
    pub valence_scale: f64,
    pub valence_offset: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            arousal_scale: 1.0,
            arousal_offset: 0.0,
            valence_scale: 1.0,
            valence_offset: 0.0,
        }
    }
}

/// Two linear maps (arousal, valence) over z-scored features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionModel {
    pub schema_version: u32,
    /// Names of the features the model uses, in canonical order.
    pub feature_names: Vec<String>,
    pub feature_means: Vec<f64>,
    /// Sample standard deviations (n − 1 denominator), all positive.
    pub feature_stds: Vec<f64>,
    pub normalization: String,
    pub arousal_fit: OlsFit,
    pub valence_fit: OlsFit,
    #[serde(default)]
    pub calibration: Calibration,
    #[serde(default)]
    pub note: String,
}

/// A predicted point in the valence/arousal plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub valence: f64,
    pub arousal: f64,
}

impl EmotionModel {
    /// A model with hand-chosen weights on already z-scored features.
    /// Diagnostics are zeroed.
    pub fn from_weights(
        subset: &FeatureSubset,
        means: Vec<f64>,
        stds: Vec<f64>,
        arousal: (f64, Vec<f64>),
        valence: (f64, Vec<f64>),
    ) -> Result<Self> {
        let p = subset.len();
        let fit = |(intercept, weights): (f64, Vec<f64>)| OlsFit {
            standard_errors: vec![0.0; weights.len()],
            t_values: vec![0.0; weights.len()],
            weights,
            intercept,
            r2: 0.0,
            adjusted_r2: 0.0,
            residual_variance: 0.0,
            n: 0,
            p,
        };
        let model = Self {
            schema_version: MODEL_SCHEMA_VERSION,
            feature_names: subset.names(),
            feature_means: means,
            feature_stds: stds,
            normalization: "zscore".into(),
            arousal_fit: fit(arousal),
            valence_fit: fit(valence),
            calibration: Calibration::default(),
            note: "hand-specified weights".into(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn subset(&self) -> Result<FeatureSubset> {
        FeatureSubset::from_names(&self.feature_names)
    }

    pub fn p(&self) -> usize {
        self.feature_names.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::VersionMismatch {
                found: self.schema_version,
                expected: MODEL_SCHEMA_VERSION,
            });
        }
        let subset = self.subset().map_err(|e| Error::Schema(e.to_string()))?;
        if subset.names() != self.feature_names {
            return Err(Error::Schema(
                "feature_names must be unique and in canonical order".into(),
            ));
        }
        let p = self.p();
        if self.normalization != "zscore" {
            return Err(Error::Schema(format!(
                "unknown normalization '{}'",
                self.normalization
            )));
        }
        if self.feature_means.len() != p || self.feature_stds.len() != p {
            return Err(Error::Schema(format!(
                "expected {p} means and stds, found {} and {}",
                self.feature_means.len(),
                self.feature_stds.len()
            )));
        }
        if let Some(i) = self.feature_stds.iter().position(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::Schema(format!(
                "feature_stds for '{}' must be positive",
                self.feature_names[i]
            )));
        }
        for (target, fit) in [("arousal", &self.arousal_fit), ("valence", &self.valence_fit)] {
            if fit.weights.len() != p || fit.standard_errors.len() != p || fit.t_values.len() != p {
                return Err(Error::Schema(format!(
                    "{target} fit does not have {p} coefficients"
                )));
            }
        }
        Ok(())
    }

    fn zscored(&self, f: &FeatureVector) -> Result<Vec<f64>> {
        f.check_finite()?;
        let subset = self.subset()?;
        Ok(subset
            .indices()
            .iter()
            .zip(self.feature_means.iter().zip(&self.feature_stds))
            .map(|(&i, (m, s))| (f.0[i] - m) / s)
            .collect())
    }
}

/// Z-scores the selected features of every row with the training mean and
/// sample standard deviation, then fits arousal and valence independently.
/// Rows are processed in clip-id order.
pub fn fit_emotion_model(ds: &Dataset, subset: &FeatureSubset) -> Result<EmotionModel> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let p = subset.len();
    let n = ds.len();
    if n < p + 2 {
        return Err(Error::TooFewRows { n, p, needed: p + 2 });
    }
    let mut rows: Vec<_> = ds.rows().iter().collect();
    rows.sort_by(|a, b| a.clip_id.cmp(&b.clip_id));

    let names = subset.names();
    let mut means = Vec::with_capacity(p);
    let mut stds = Vec::with_capacity(p);
    for (&idx, name) in subset.indices().iter().zip(&names) {
        let col: Vec<f64> = rows.iter().map(|r| r.features.0[idx]).collect();
        let mean = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let std = var.sqrt();
        if std.is_nan() || std <= 1e-12 * mean.abs() {
            return Err(Error::ZeroVariance(name.clone()));
        }
        means.push(mean);
        stds.push(std);
    }

    let design: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            subset
                .indices()
                .iter()
                .zip(means.iter().zip(&stds))
                .map(|(&i, (m, s))| (r.features.0[i] - m) / s)
                .collect()
        })
        .collect();
    let arousal: Vec<f64> = rows.iter().map(|r| r.arousal).collect();
    let valence: Vec<f64> = rows.iter().map(|r| r.valence).collect();

    Ok(EmotionModel {
        schema_version: MODEL_SCHEMA_VERSION,
        feature_names: names.clone(),
        feature_means: means,
        feature_stds: stds,
        normalization: "zscore".into(),
        arousal_fit: fit_ols_named(&design, &arousal, &names)?,
        valence_fit: fit_ols_named(&design, &valence, &names)?,
        calibration: Calibration::default(),
        note: "in-sample fit; r2 and adjusted_r2 are training-set values".into(),
    })
}

/// Applies both linear maps and the calibration, clamping to `[-1, 1]²`.
pub fn predict(model: &EmotionModel, f: &FeatureVector) -> Result<Prediction> {
    let z = model.zscored(f)?;
    let c = &model.calibration;
    let arousal = c.arousal_scale * model.arousal_fit.predict(&z) + c.arousal_offset;
    let valence = c.valence_scale * model.valence_fit.predict(&z) + c.valence_offset;
    Ok(Prediction {
        valence: clamp_unit(valence),
        arousal: clamp_unit(arousal),
    })
}

fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(-1.0, 1.0)
    }
}

pub fn save_model(model: &EmotionModel, path: impl AsRef<Path>) -> Result<()> {
    model.validate()?;
    let mut text = serde_json::to_string_pretty(model).map_err(|e| Error::Schema(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<EmotionModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text)
}

pub(crate) fn parse_model(text: &str) -> Result<EmotionModel> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    match value.get("schema_version").and_then(serde_json::Value::as_u64) {
        Some(v) if v == u64::from(MODEL_SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(Error::VersionMismatch {
                found: v as u32,
                expected: MODEL_SCHEMA_VERSION,
            })
        }
        None => return Err(Error::Schema("missing schema_version".into())),
    }
    let model: EmotionModel =
        serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    model.validate()?;
    Ok(model)
}
