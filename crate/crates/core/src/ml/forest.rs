use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{GrowParams, Grower, LeafValue, SplitTarget, Tree};
use super::{check_dim, derive_seed, Dataset, MlError, Target};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FeatureSubsample {
    /// `ceil(sqrt(d))` candidate features per split.
    Sqrt,
    /// `ceil(fraction * d)` candidate features per split.
    Fraction(f64),
}

impl FeatureSubsample {
    pub fn count(self, d: usize) -> usize {
        let m = match self {
            FeatureSubsample::Sqrt => (d as f64).sqrt().ceil() as usize,
            FeatureSubsample::Fraction(f) => (f * d as f64).ceil() as usize,
        };
        m.clamp(1, d.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub feature_subsample: FeatureSubsample,
    /// Draw a bootstrap sample per tree; otherwise every tree sees all rows.
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: 16,
            min_leaf: 5,
            feature_subsample: FeatureSubsample::Sqrt,
            bootstrap: true,
        }
    }
}

impl ForestConfig {
    pub fn validate(&self) -> Result<(), MlError> {
        if self.n_trees == 0 {
            return Err(MlError::DegenerateInput("forest needs at least one tree".into()));
        }
        if let FeatureSubsample::Fraction(f) = self.feature_subsample {
            if !(f > 0.0 && f <= 1.0) {
                return Err(MlError::DegenerateInput(format!("feature fraction {f} outside (0, 1]")));
            }
        }
        Ok(())
    }

    pub(crate) fn grow_params(&self, d: usize) -> GrowParams {
        GrowParams {
            max_depth: self.max_depth,
            min_leaf: self.min_leaf.max(1),
            features_per_split: self.feature_subsample.count(d),
        }
    }
}

pub(crate) fn bootstrap_rows<R: Rng>(n: usize, enabled: bool, rng: &mut R) -> Vec<usize> {
    if enabled {
        (0..n).map(|_| rng.random_range(0..n)).collect()
    } else {
        (0..n).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForestTask {
    Regression,
    Classification { n_classes: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<Tree<LeafValue>>,
    pub task: ForestTask,
    pub dim: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    Value(f64),
    /// Winning class and the share of trees voting for each class.
    Class { class: usize, shares: Vec<f64> },
}

/// Bagged CART forest. The task follows the dataset's target type; sample
/// weights enter split impurities and leaf statistics.
pub fn fit_forest(data: &Dataset, config: &ForestConfig, seed: u64) -> Result<ForestModel, MlError> {
    let d = data.validate()?;
    config.validate()?;
    let n = data.x.len();
    let weights = data.weights.clone().unwrap_or_else(|| vec![1.0; n]);
    let task = match &data.y {
        Target::Real(_) => ForestTask::Regression,
        Target::Class { n_classes, .. } => ForestTask::Classification { n_classes: *n_classes },
    };

    let trees = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
            let rows = bootstrap_rows(n, config.bootstrap, &mut rng);
            let params = config.grow_params(d);
            match &data.y {
                Target::Real(y) => Grower {
                    x: &data.x,
                    target: SplitTarget::Scalar(y),
                    weights: &weights,
                    params,
                    make_leaf: |s: &[usize]| LeafValue::Mean(weighted_mean(s, y, &weights)),
                }
                .grow(rows, &mut rng),
                Target::Class { labels, n_classes } => Grower {
                    x: &data.x,
                    target: SplitTarget::Classes {
                        labels,
                        n_classes: *n_classes,
                    },
                    weights: &weights,
                    params,
                    make_leaf: |s: &[usize]| LeafValue::Histogram(class_histogram(s, labels, *n_classes, &weights)),
                }
                .grow(rows, &mut rng),
            }
        })
        .collect();

    Ok(ForestModel {
        trees,
        task,
        dim: d,
        seed,
    })
}

fn weighted_mean(samples: &[usize], y: &[f64], w: &[f64]) -> f64 {
    let total: f64 = samples.iter().map(|&i| w[i]).sum();
    if total > 0.0 {
        samples.iter().map(|&i| w[i] * y[i]).sum::<f64>() / total
    } else {
        samples.iter().map(|&i| y[i]).sum::<f64>() / samples.len() as f64
    }
}

/// Class weights of a leaf; falls back to plain counts when every sample in
/// the leaf has zero weight.
fn class_histogram(samples: &[usize], labels: &[usize], n_classes: usize, w: &[f64]) -> Vec<f64> {
    let mut h = vec![0.0; n_classes];
    for &i in samples {
        h[labels[i]] += w[i];
    }
    if h.iter().all(|v| *v == 0.0) {
        for &i in samples {
            h[labels[i]] += 1.0;
        }
    }
    h
}

fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Regression: mean of leaf means. Classification: each tree votes for the
/// heaviest class of its leaf; ties go to the lowest class index.
pub fn forest_predict(model: &ForestModel, x: &[f64]) -> Result<Prediction, MlError> {
    check_dim(model.dim, x)?;
    match model.task {
        ForestTask::Regression => {
            let sum: f64 = model
                .trees
                .iter()
                .map(|t| match t.leaf_for(x) {
                    LeafValue::Mean(m) => *m,
                    LeafValue::Histogram(_) => unreachable!("regression leaves hold means"),
                })
                .sum();
            Ok(Prediction::Value(sum / model.trees.len() as f64))
        }
        ForestTask::Classification { n_classes } => {
            let mut votes = vec![0.0; n_classes];
            for t in &model.trees {
                match t.leaf_for(x) {
                    LeafValue::Histogram(h) => votes[argmax_lowest(h)] += 1.0,
                    LeafValue::Mean(_) => unreachable!("classification leaves hold histograms"),
                }
            }
            let n = model.trees.len() as f64;
            let shares: Vec<f64> = votes.iter().map(|v| v / n).collect();
            Ok(Prediction::Class {
                class: argmax_lowest(&votes),
                shares,
            })
        }
    }
}

impl ForestModel {
    pub fn predict(&self, x: &[f64]) -> Result<Prediction, MlError> {
        forest_predict(self, x)
    }

    pub fn predict_value(&self, x: &[f64]) -> Result<f64, MlError> {
        match self.predict(x)? {
            Prediction::Value(v) => Ok(v),
            Prediction::Class { class, .. } => Ok(class as f64),
        }
    }

    pub fn vote_shares(&self, x: &[f64]) -> Result<Vec<f64>, MlError> {
        match self.predict(x)? {
            Prediction::Class { shares, .. } => Ok(shares),
            Prediction::Value(v) => Ok(vec![v]),
        }
    }
}
