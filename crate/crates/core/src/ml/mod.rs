//! Self-contained learning primitives shared by the selectors: ridge
//! regression, bagged decision forests, k-means, nearest neighbours and
//! survival forests with Kaplan-Meier leaves.

mod forest;
mod kmeans;
mod knn;
mod ridge;
mod survival;
mod tree;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use forest::{fit_forest, forest_predict, FeatureSubsample, ForestConfig, ForestModel, ForestTask, Prediction};
pub use kmeans::{fit_kmeans, KMeansModel, MAX_LLOYD_ITERATIONS};
pub use knn::{nearest_neighbors, squared_distance};
pub use ridge::{fit_ridge, RidgeModel, Scaling};
pub use survival::{
    curve_risk, fit_survival_forest, km_estimate, survival_curve, KaplanMeierCurve, RiskMode, SurvivalForestModel,
};
pub use tree::{LeafValue, Node, Tree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MlError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Training data: rows of `x` are samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub x: Vec<Vec<f64>>,
    pub y: Target,
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Target {
    Real(Vec<f64>),
    Class { labels: Vec<usize>, n_classes: usize },
}

impl Target {
    pub fn len(&self) -> usize {
        match self {
            Target::Real(y) => y.len(),
            Target::Class { labels, .. } => labels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Dataset {
    pub fn regression(x: Vec<Vec<f64>>, y: Vec<f64>) -> Self {
        Self {
            x,
            y: Target::Real(y),
            weights: None,
        }
    }

    pub fn classification(x: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> Self {
        Self {
            x,
            y: Target::Class { labels, n_classes },
            weights: None,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn validate(&self) -> Result<usize, MlError> {
        let d = check_matrix(&self.x)?;
        if self.y.len() != self.x.len() {
            return Err(MlError::DegenerateInput(format!(
                "{} rows but {} targets",
                self.x.len(),
                self.y.len()
            )));
        }
        if let Target::Class { labels, n_classes } = &self.y {
            if *n_classes == 0 || labels.iter().any(|l| l >= n_classes) {
                return Err(MlError::DegenerateInput("class label out of range".into()));
            }
        }
        if let Target::Real(y) = &self.y {
            if y.iter().any(|v| !v.is_finite()) {
                return Err(MlError::DegenerateInput("non-finite regression target".into()));
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.x.len() {
                return Err(MlError::DegenerateInput("weight vector length differs from row count".into()));
            }
            if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(MlError::DegenerateInput("weights must be finite and nonnegative".into()));
            }
            if w.iter().all(|v| *v == 0.0) {
                return Err(MlError::DegenerateInput("all weights are zero".into()));
            }
        }
        Ok(d)
    }
}

/// Checks that `x` is a nonempty rectangular matrix of finite values and
/// returns its column count.
pub(crate) fn check_matrix(x: &[Vec<f64>]) -> Result<usize, MlError> {
    let first = x.first().ok_or_else(|| MlError::DegenerateInput("no rows".into()))?;
    let d = first.len();
    for row in x {
        if row.len() != d {
            return Err(MlError::DimensionMismatch {
                expected: d,
                found: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(MlError::DegenerateInput("non-finite feature value".into()));
        }
    }
    Ok(d)
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<(), MlError> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(MlError::DimensionMismatch {
            expected,
            found: x.len(),
        })
    }
}

/// Derives an independent sub-seed for task `index` from a master seed
/// (splitmix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
