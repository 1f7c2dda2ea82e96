//! Multiple linear regression from the nine-feature vector to arousal and
//! valence: OLS fitting with diagnostics, model persistence, prediction and
//! T-statistic importance reports.

mod dataset;
mod feature;
mod model;
mod ols;
mod report;

pub use dataset::{load_dataset, save_dataset, Dataset, DatasetRow};
pub use feature::{FeatureSubset, FeatureVector, FEATURE_NAMES};
pub use model::{
    fit_emotion_model, load_model, predict, save_model, Calibration, EmotionModel, Prediction,
    MODEL_SCHEMA_VERSION,
};
pub use ols::{fit_ols, fit_ols_named, OlsFit};
pub use report::{fit_report, importance_report, ImportanceReport};
