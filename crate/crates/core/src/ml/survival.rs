//! Kaplan-Meier estimation, survival forests and the risk scores derived
//! from a survival curve under a runtime cutoff.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::forest::{bootstrap_rows, ForestConfig};
use super::tree::{Grower, SplitTarget, Tree};
use super::{check_dim, check_matrix, derive_seed, MlError};

/// Right-continuous step survival function. `S(t) = 1` before the first
/// breakpoint and `S(t) = values[k]` on `[breakpoints[k], breakpoints[k+1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KaplanMeierCurve {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl KaplanMeierCurve {
    /// The curve that never drops: no event was observed.
    pub fn flat() -> Self {
        Self {
            breakpoints: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        match self.breakpoints.partition_point(|&b| b <= t) {
            0 => 1.0,
            k => self.values[k - 1],
        }
    }

    /// `∫_0^upper S(t) dt`, exact on the step function.
    pub fn integral(&self, upper: f64) -> f64 {
        let mut area = 0.0;
        let mut prev = 0.0;
        let mut level = 1.0;
        for (&b, &v) in self.breakpoints.iter().zip(&self.values) {
            if b >= upper {
                break;
            }
            area += level * (b - prev);
            prev = b;
            level = v;
        }
        area + level * (upper - prev).max(0.0)
    }
}

/// Product-limit estimator. At each distinct event time with `d` events and
/// `n` samples at risk (time >= t), the curve is multiplied by `1 - d/n`.
/// Censored samples only shrink the risk set.
pub fn km_estimate(times: &[f64], censored: &[bool]) -> Result<KaplanMeierCurve, MlError> {
    if times.is_empty() {
        return Err(MlError::DegenerateInput("no survival times".into()));
    }
    if times.len() != censored.len() {
        return Err(MlError::DegenerateInput(format!(
            "{} times but {} censoring flags",
            times.len(),
            censored.len()
        )));
    }
    if times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(MlError::DegenerateInput("survival times must be positive and finite".into()));
    }
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));

    let mut curve = KaplanMeierCurve::flat();
    let mut at_risk = times.len();
    let mut surv = 1.0;
    let mut k = 0;
    while k < order.len() {
        let t = times[order[k]];
        let mut events = 0;
        let mut group = 0;
        while k + group < order.len() && times[order[k + group]] == t {
            if !censored[order[k + group]] {
                events += 1;
            }
            group += 1;
        }
        if events > 0 {
            surv *= 1.0 - events as f64 / at_risk as f64;
            curve.breakpoints.push(t);
            curve.values.push(surv);
        }
        at_risk -= group;
        k += group;
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RiskMode {
    /// `E[min(T, C)] = ∫_0^C S(t) dt`.
    ExpectedRuntime,
    /// `E[T 1{T <= C}] + 10 C P(T > C) = ∫_0^C S(t) dt + 9 C S(C)`.
    ExpectedPar10,
}

pub fn curve_risk(curve: &KaplanMeierCurve, cutoff: f64, mode: RiskMode) -> f64 {
    let area = curve.integral(cutoff);
    match mode {
        RiskMode::ExpectedRuntime => area,
        RiskMode::ExpectedPar10 => area + 9.0 * cutoff * curve.at(cutoff),
    }
}

/// Samples of a survival leaf as `(time, censored)` pairs.
pub type SurvivalLeaf = Vec<(f64, bool)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalForestModel {
    pub trees: Vec<Tree<SurvivalLeaf>>,
    pub dim: usize,
    pub seed: u64,
}

/// Bagged survival trees. Splits maximize the between-child sum of squares of
/// observed times, `n_l n_r / n (mean_l - mean_r)^2`, in place of a log-rank
/// statistic.
pub fn fit_survival_forest(
    x: &[Vec<f64>],
    times: &[f64],
    censored: &[bool],
    config: &ForestConfig,
    seed: u64,
) -> Result<SurvivalForestModel, MlError> {
    let d = check_matrix(x)?;
    config.validate()?;
    if times.len() != x.len() || censored.len() != x.len() {
        return Err(MlError::DegenerateInput("survival labels do not match row count".into()));
    }
    // Validates the labels once up front.
    km_estimate(times, censored)?;

    let n = x.len();
    let weights = vec![1.0; n];
    let trees = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
            let rows = bootstrap_rows(n, config.bootstrap, &mut rng);
            Grower {
                x,
                target: SplitTarget::Scalar(times),
                weights: &weights,
                params: config.grow_params(d),
                make_leaf: |s: &[usize]| s.iter().map(|&i| (times[i], censored[i])).collect::<SurvivalLeaf>(),
            }
            .grow(rows, &mut rng)
        })
        .collect();
    Ok(SurvivalForestModel { trees, dim: d, seed })
}

/// Pools the samples of the leaf reached in every tree and runs the
/// product-limit estimator on the pooled sample.
pub fn survival_curve(model: &SurvivalForestModel, x: &[f64]) -> Result<KaplanMeierCurve, MlError> {
    check_dim(model.dim, x)?;
    let mut times = Vec::new();
    let mut censored = Vec::new();
    for tree in &model.trees {
        for &(t, c) in tree.leaf_for(x) {
            times.push(t);
            censored.push(c);
        }
    }
    km_estimate(&times, &censored)
}

impl SurvivalForestModel {
    pub fn curve(&self, x: &[f64]) -> Result<KaplanMeierCurve, MlError> {
        survival_curve(self, x)
    }
}
