use std::fmt;

use crate::error::{Error, Result};
use crate::midlevel::{MidLevelVector, MIDLEVEL_NAMES};

/// Canonical order of the regression inputs: seven mid-level features,
/// then onset density (onsets/s) and mean RMS amplitude.
pub const FEATURE_NAMES: [&str; 9] = [
    MIDLEVEL_NAMES[0],
    MIDLEVEL_NAMES[1],
    MIDLEVEL_NAMES[2],
    MIDLEVEL_NAMES[3],
    MIDLEVEL_NAMES[4],
    MIDLEVEL_NAMES[5],
    MIDLEVEL_NAMES[6],
    "onset_density",
    "mean_rms",
];

pub(crate) const ONSET_DENSITY: usize = 7;
pub(crate) const MEAN_RMS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector(pub [f64; 9]);

impl FeatureVector {
    pub fn new(midlevel: MidLevelVector, onset_density: f64, mean_rms: f64) -> Self {
        let mut v = [0.0; 9];
        v[..7].copy_from_slice(midlevel.values());
        v[ONSET_DENSITY] = onset_density;
        v[MEAN_RMS] = mean_rms;
        Self(v)
    }

    pub fn onset_density(&self) -> f64 {
        self.0[ONSET_DENSITY]
    }

    pub fn mean_rms(&self) -> f64 {
        self.0[MEAN_RMS]
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.0.iter().position(|v| !v.is_finite()) {
            Some(i) => Err(Error::NonFiniteFeature(FEATURE_NAMES[i].into())),
            None => Ok(()),
        }
    }
}

/// Non-empty set of feature indices, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSubset(Vec<usize>);

impl FeatureSubset {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= FEATURE_NAMES.len()) {
            return Err(Error::UnknownFeature(format!("#{bad}")));
        }
        Ok(Self(indices))
    }

    /// All nine features.
    pub fn all() -> Self {
        Self((0..9).collect())
    }

    /// The seven mid-level features.
    pub fn midlevel7() -> Self {
        Self((0..7).collect())
    }

    /// Onset density and mean RMS only.
    pub fn new2() -> Self {
        Self(vec![ONSET_DENSITY, MEAN_RMS])
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let indices = names
            .iter()
            .map(|n| {
                let n = n.as_ref().trim();
                FEATURE_NAMES
                    .iter()
                    .position(|f| *f == n)
                    .ok_or_else(|| Error::UnknownFeature(n.into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(indices)
    }

    /// Parses `all`, `midlevel7`, `new2` or a comma-separated list of names.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec.trim() {
            "all" => Ok(Self::all()),
            "midlevel7" => Ok(Self::midlevel7()),
            "new2" => Ok(Self::new2()),
            "" => Err(Error::EmptySubset),
            list => Self::from_names(&list.split(',').collect::<Vec<_>>()),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(|&i| FEATURE_NAMES[i].to_string()).collect()
    }

    /// Row label in the style of a feature-set comparison table.
    pub fn label(&self) -> String {
        if *self == Self::all() {
            "The (9)-mid-level feature set".into()
        } else if *self == Self::midlevel7() {
            "The (7)-mid-level feature set".into()
        } else if *self == Self::new2() {
            "Onset density and RMS amplitude".into()
        } else {
            format!("Custom ({}) feature set", self.names().join(", "))
        }
    }
}

impl fmt::Display for FeatureSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(","))
    }
}
