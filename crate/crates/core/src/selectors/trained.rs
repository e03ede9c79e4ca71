use log::warn;
use serde::{Deserialize, Serialize};

use super::{Family, Preprocessing, SelectorError, SelectorSpec, TrainingSet};
use crate::aslib::Scenario;
use crate::ml::{
    curve_risk, derive_seed, fit_forest, fit_kmeans, fit_ridge, fit_survival_forest, nearest_neighbors, Dataset,
    ForestModel, KMeansModel, Prediction, RidgeModel, RiskMode, SurvivalForestModel,
};

/// Cost-sensitive classifier for one pair of choices; class 0 means `first`
/// wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairModel {
    pub first: usize,
    pub second: usize,
    pub forest: ForestModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SelectorModel {
    /// One ridge model of PAR10 per choice.
    PAReg(Vec<RidgeModel>),
    /// Classification forest over the per-row best choice.
    Mcc(ForestModel),
    /// Cluster model plus the best choice of every cluster.
    Isac { clusters: KMeansModel, table: Vec<usize> },
    /// Stored training rows and their PAR10 per choice.
    Sunny { x: Vec<Vec<f64>>, par10: Vec<Vec<f64>>, k: usize },
    /// Pairs whose training rows all tie carry no model and cast no vote.
    SatZilla { n_choices: usize, pairs: Vec<PairModel> },
    Survival { forests: Vec<SurvivalForestModel>, mode: RiskMode },
}

/// A fitted selector. Immutable after training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedSelector {
    pub spec: SelectorSpec,
    pub choice_ids: Vec<String>,
    /// Choices excluded because no training row observed them.
    pub dropped: Vec<String>,
    pub cutoff: f64,
    pub preprocessing: Preprocessing,
    pub model: SelectorModel,
}

/// Index of the smallest score; equal scores go to the lexicographically
/// smallest id, and NaN never wins.
pub fn select_from_scores(scores: &[f64], ids: &[String]) -> usize {
    let key = |s: f64| if s.is_nan() { f64::INFINITY } else { s };
    let mut best = 0;
    for j in 1..scores.len() {
        let (a, b) = (key(scores[j]), key(scores[best]));
        if a < b || (a == b && ids[j] < ids[best]) {
            best = j;
        }
    }
    best
}

/// Vote count per choice given the winner of each pairwise duel.
pub fn tally_pairwise(n_choices: usize, winners: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut votes = vec![0; n_choices];
    for w in winners {
        votes[w] += 1;
    }
    votes
}

pub fn train_selector(spec: &SelectorSpec, train: &Scenario, subset: &[String]) -> Result<TrainedSelector, SelectorError> {
    train_on(spec, TrainingSet::from_scenario(train, subset)?)
}

pub fn train_on(spec: &SelectorSpec, mut data: TrainingSet) -> Result<TrainedSelector, SelectorError> {
    spec.validate()?;
    if data.n_rows() == 0 {
        return Err(SelectorError::DegenerateInput("empty training subset".into()));
    }
    let dropped = data.drop_unobserved();
    if !dropped.is_empty() {
        warn!("{}: dropping choices without training runs: {}", spec.family, dropped.join(", "));
    }
    if data.choice_ids.is_empty() {
        return Err(SelectorError::DegenerateInput("no choice has a training run".into()));
    }
    let (preprocessing, x) = Preprocessing::fit(&data.features)?;
    let model = match spec.family {
        Family::PAReg => fit_pareg(spec, &data, &x)?,
        Family::Mcc => fit_mcc(spec, &data, &x)?,
        Family::Isac => fit_isac(spec, &data, &x)?,
        Family::Sunny => SelectorModel::Sunny {
            par10: par10_matrix(&data),
            x,
            k: spec.hyper.sunny_k,
        },
        Family::SatZilla11 => fit_satzilla(spec, &data, &x)?,
        Family::R2SExp => fit_survival(spec, &data, &x, RiskMode::ExpectedRuntime)?,
        Family::R2SPar10 => fit_survival(spec, &data, &x, RiskMode::ExpectedPar10)?,
    };
    Ok(TrainedSelector {
        spec: spec.clone(),
        choice_ids: data.choice_ids,
        dropped,
        cutoff: data.cutoff,
        preprocessing,
        model,
    })
}

fn par10_matrix(data: &TrainingSet) -> Vec<Vec<f64>> {
    (0..data.n_rows())
        .map(|r| (0..data.choice_ids.len()).map(|c| data.mean_par10(r, c)).collect())
        .collect()
}

fn fit_pareg(spec: &SelectorSpec, data: &TrainingSet, x: &[Vec<f64>]) -> Result<SelectorModel, SelectorError> {
    let models = (0..data.choice_ids.len())
        .map(|c| {
            let y: Vec<f64> = (0..data.n_rows()).map(|r| data.mean_par10(r, c)).collect();
            fit_ridge(x, &y, spec.hyper.ridge_lambda)
        })
        .collect::<Result<_, _>>()?;
    Ok(SelectorModel::PAReg(models))
}

fn fit_mcc(spec: &SelectorSpec, data: &TrainingSet, x: &[Vec<f64>]) -> Result<SelectorModel, SelectorError> {
    let labels = par10_matrix(data)
        .iter()
        .map(|row| select_from_scores(row, &data.choice_ids))
        .collect();
    let ds = Dataset::classification(x.to_vec(), labels, data.choice_ids.len());
    Ok(SelectorModel::Mcc(fit_forest(&ds, &spec.hyper.forest, spec.seed)?))
}

fn fit_isac(spec: &SelectorSpec, data: &TrainingSet, x: &[Vec<f64>]) -> Result<SelectorModel, SelectorError> {
    let n = data.n_rows();
    let k = spec
        .hyper
        .isac_k
        .unwrap_or_else(|| ((n as f64 / 2.0).sqrt().ceil() as usize).max(1))
        .clamp(1, n);
    let clusters = fit_kmeans(x, k, spec.seed)?;
    let perf = par10_matrix(data);
    let best_of = |rows: &[usize]| {
        let means: Vec<f64> = (0..data.choice_ids.len())
            .map(|c| rows.iter().map(|&r| perf[r][c]).sum::<f64>() / rows.len() as f64)
            .collect();
        select_from_scores(&means, &data.choice_ids)
    };
    let all: Vec<usize> = (0..n).collect();
    let sbs = best_of(&all);
    let table = (0..k)
        .map(|j| {
            let rows: Vec<usize> = all.iter().copied().filter(|&r| clusters.assignments[r] == j).collect();
            if rows.is_empty() {
                sbs
            } else {
                best_of(&rows)
            }
        })
        .collect();
    Ok(SelectorModel::Isac { clusters, table })
}

fn fit_satzilla(spec: &SelectorSpec, data: &TrainingSet, x: &[Vec<f64>]) -> Result<SelectorModel, SelectorError> {
    let m = data.choice_ids.len();
    let perf = par10_matrix(data);
    let mut pairs = Vec::new();
    let mut pair_index = 0u64;
    for first in 0..m {
        for second in first + 1..m {
            pair_index += 1;
            let weights: Vec<f64> = perf.iter().map(|r| (r[first] - r[second]).abs()).collect();
            if weights.iter().all(|&w| w == 0.0) {
                continue;
            }
            let labels = perf.iter().map(|r| usize::from(r[second] < r[first])).collect();
            let ds = Dataset::classification(x.to_vec(), labels, 2).with_weights(weights);
            let forest = fit_forest(&ds, &spec.hyper.forest, derive_seed(spec.seed, pair_index))?;
            pairs.push(PairModel { first, second, forest });
        }
    }
    Ok(SelectorModel::SatZilla { n_choices: m, pairs })
}

fn fit_survival(spec: &SelectorSpec, data: &TrainingSet, x: &[Vec<f64>], mode: RiskMode) -> Result<SelectorModel, SelectorError> {
    let forests = (0..data.choice_ids.len())
        .map(|c| {
            let mut xs = Vec::new();
            let mut times = Vec::new();
            let mut censored = Vec::new();
            for (r, row) in data.outcomes.iter().enumerate() {
                for o in &row[c] {
                    xs.push(x[r].clone());
                    times.push(o.time);
                    censored.push(o.censored);
                }
            }
            fit_survival_forest(&xs, &times, &censored, &spec.hyper.forest, derive_seed(spec.seed, c as u64))
        })
        .collect::<Result<_, _>>()?;
    Ok(SelectorModel::Survival { forests, mode })
}

impl TrainedSelector {
    pub fn family(&self) -> Family {
        self.spec.family
    }

    /// Per-choice scores aligned with `choice_ids`; lower is better.
    pub fn predict_scores(&self, x: &[Option<f64>]) -> Result<Vec<f64>, SelectorError> {
        let z = self.preprocessing.transform(x)?;
        let m = self.choice_ids.len();
        let scores = match &self.model {
            SelectorModel::PAReg(models) => models.iter().map(|r| r.predict(&z)).collect::<Result<_, _>>()?,
            SelectorModel::Mcc(forest) => forest.vote_shares(&z)?.into_iter().map(|s| -s).collect(),
            SelectorModel::Isac { clusters, table } => {
                let best = table[clusters.assign(&z)?];
                (0..m).map(|c| if c == best { 0.0 } else { 1.0 }).collect()
            }
            SelectorModel::Sunny { x, par10, k } => {
                let neighbors = nearest_neighbors(x, &z, *k)?;
                let penalty = 10.0 * self.cutoff;
                // Solved count dominates: the runtime sum over the neighbors
                // stays below (k + 1) * 10C.
                let weight = (neighbors.len() + 1) as f64 * penalty;
                (0..m)
                    .map(|c| {
                        let solved = neighbors.iter().filter(|&&r| par10[r][c] < penalty).count();
                        let total: f64 = neighbors.iter().map(|&r| par10[r][c]).sum();
                        total - solved as f64 * weight
                    })
                    .collect()
            }
            SelectorModel::SatZilla { n_choices, pairs } => {
                let winners = pairs
                    .iter()
                    .map(|p| {
                        Ok(match p.forest.predict(&z)? {
                            Prediction::Class { class: 0, .. } => p.first,
                            _ => p.second,
                        })
                    })
                    .collect::<Result<Vec<_>, SelectorError>>()?;
                tally_pairwise(*n_choices, winners).into_iter().map(|v| -(v as f64)).collect()
            }
            SelectorModel::Survival { forests, mode } => forests
                .iter()
                .map(|f| Ok(curve_risk(&f.curve(&z)?, self.cutoff, *mode)))
                .collect::<Result<_, SelectorError>>()?,
        };
        Ok(scores)
    }

    pub fn select(&self, x: &[Option<f64>]) -> Result<&str, SelectorError> {
        let scores = self.predict_scores(x)?;
        Ok(&self.choice_ids[select_from_scores(&scores, &self.choice_ids)])
    }
}
