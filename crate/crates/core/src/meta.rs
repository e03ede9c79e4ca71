//! The meta level: pools of selectors, their realized performance, and the
//! selector that picks a selector which then picks the algorithm.

use std::collections::HashMap;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aslib::Scenario;
use crate::baselines::{BaselineError, PerformanceMatrix};
use crate::eval::{make_folds, par10, EvalError, Protocol};
use crate::selectors::{train_on, train_selector, SelectorError, SelectorSpec, TrainedSelector, TrainingSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetaError {
    #[error(transparent)]
    Selector(#[from] SelectorError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("selector '{0}' is not in the pool")]
    UnknownSelector(String),
    #[error("no run of '{algorithm}' on '{instance}'")]
    UnknownRun { instance: String, algorithm: String },
    #[error("duplicate pool id '{0}'")]
    DuplicateId(String),
    #[error("selector pool is empty")]
    EmptyPool,
    #[error("invalid cost policy: sharing features requires charging them")]
    InvalidPolicy,
    #[error("unknown instance '{0}'")]
    UnknownInstance(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PoolMember {
    Trained(Box<TrainedSelector>),
    /// Always picks the same algorithm and never looks at features.
    Constant { algorithm: String },
}

impl PoolMember {
    pub fn select(&self, x: &[Option<f64>]) -> Result<&str, SelectorError> {
        match self {
            PoolMember::Trained(t) => t.select(x),
            PoolMember::Constant { algorithm } => Ok(algorithm),
        }
    }

    pub fn uses_features(&self) -> bool {
        matches!(self, PoolMember::Trained(_))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SelectorPool {
    pub members: Vec<(String, PoolMember)>,
}

impl SelectorPool {
    pub fn push(&mut self, id: String, member: PoolMember) -> Result<(), MetaError> {
        if self.get(&id).is_some() {
            return Err(MetaError::DuplicateId(id));
        }
        self.members.push((id, member));
        Ok(())
    }

    pub fn ids(&self) -> Vec<String> {
        self.members.iter().map(|(id, _)| id.clone()).collect()
    }

    pub fn get(&self, id: &str) -> Option<&PoolMember> {
        self.members.iter().find(|(m, _)| m == id).map(|(_, m)| m)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Pool ids for a list of specs: the family display name, suffixed `#2`,
/// `#3`, ... for repeats.
pub fn member_ids(specs: &[SelectorSpec]) -> Vec<String> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    specs
        .iter()
        .map(|s| {
            let name = s.family.display_name();
            let n = seen.entry(name).or_insert(0);
            *n += 1;
            if *n == 1 {
                name.to_string()
            } else {
                format!("{name}#{n}")
            }
        })
        .collect()
}

pub fn constant_id(algorithm: &str) -> String {
    format!("const:{algorithm}")
}

/// Appends one constant selector per algorithm of `s` not already present.
pub fn add_constant_selectors(mut pool: SelectorPool, s: &Scenario) -> SelectorPool {
    for a in &s.algorithm_ids {
        let id = constant_id(a);
        if pool.get(&id).is_none() {
            pool.members.push((id, PoolMember::Constant { algorithm: a.clone() }));
        }
    }
    pool
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CostPolicy {
    pub include_feature_costs: bool,
    /// Features computed for the meta selector are reused by the selected
    /// selector, so the cost is paid once.
    pub share_between_levels: bool,
}

impl CostPolicy {
    pub fn validate(&self) -> Result<(), MetaError> {
        if self.share_between_levels && !self.include_feature_costs {
            return Err(MetaError::InvalidPolicy);
        }
        Ok(())
    }

    /// Cost charged for running a base-level member on an instance.
    pub fn member_cost(&self, cost: f64, uses_features: bool) -> f64 {
        if self.include_feature_costs && uses_features {
            cost
        } else {
            0.0
        }
    }

    /// Cost charged for a meta selector whose chosen member has the given
    /// feature usage.
    pub fn meta_cost(&self, cost: f64, member_uses_features: bool) -> f64 {
        if self.include_feature_costs && !(self.share_between_levels && member_uses_features) {
            cost
        } else {
            0.0
        }
    }
}

/// PAR10 plus charged feature cost; a charge beyond the cutoff leaves no
/// time to solve the instance.
pub fn charge(par10: f64, cost: f64, cutoff: f64) -> f64 {
    if cost > cutoff {
        10.0 * cutoff
    } else {
        par10 + cost
    }
}

/// Mean PAR10 per `[instance][algorithm]`, `None` where no run exists.
pub fn base_par10(s: &Scenario) -> Vec<Vec<Option<f64>>> {
    s.run_table()
        .iter()
        .map(|row| {
            row.iter()
                .map(|reps| {
                    (!reps.is_empty()).then(|| {
                        reps.iter().map(|r| par10(r.runtime, r.status, s.cutoff)).sum::<f64>() / reps.len() as f64
                    })
                })
                .collect()
        })
        .collect()
}

/// Looks up the run value of the chosen algorithm, filling `10 C` for a
/// missing run unless `strict`.
pub(crate) fn run_value(
    s: &Scenario,
    table: &[Vec<Option<f64>>],
    alg_index: &HashMap<&str, usize>,
    row: usize,
    algorithm: &str,
    strict: bool,
) -> Result<f64, MetaError> {
    let value = alg_index.get(algorithm).and_then(|&a| table[row][a]);
    match value {
        Some(v) => Ok(v),
        None if strict => Err(MetaError::UnknownRun {
            instance: s.instance_ids[row].clone(),
            algorithm: algorithm.to_string(),
        }),
        None => {
            warn!("no run of '{algorithm}' on '{}'; scoring 10C", s.instance_ids[row]);
            Ok(10.0 * s.cutoff)
        }
    }
}

fn row_indices(s: &Scenario, rows: &[String]) -> Result<Vec<usize>, MetaError> {
    let index = s.instance_index();
    rows.iter()
        .map(|id| index.get(id.as_str()).copied().ok_or_else(|| MetaError::UnknownInstance(id.clone())))
        .collect()
}

/// Realized `m(i, s(i))` for every pool member on `rows`.
pub fn realized_performance_matrix(
    s: &Scenario,
    pool: &SelectorPool,
    rows: &[String],
    policy: &CostPolicy,
) -> Result<PerformanceMatrix, MetaError> {
    realize(s, &base_par10(s), pool, rows, policy, false)
}

pub(crate) fn realize(
    s: &Scenario,
    table: &[Vec<Option<f64>>],
    pool: &SelectorPool,
    rows: &[String],
    policy: &CostPolicy,
    strict: bool,
) -> Result<PerformanceMatrix, MetaError> {
    policy.validate()?;
    let alg_index = s.algorithm_index();
    let values = row_indices(s, rows)?
        .into_iter()
        .map(|i| {
            pool.members
                .iter()
                .map(|(_, m)| {
                    let a = m.select(&s.features[i])?;
                    let v = run_value(s, table, &alg_index, i, a, strict)?;
                    Ok(charge(v, policy.member_cost(s.feature_costs[i], m.uses_features()), s.cutoff))
                })
                .collect::<Result<Vec<f64>, MetaError>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(PerformanceMatrix::new(rows.to_vec(), pool.ids(), values)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaOptions {
    pub inner_folds: usize,
    /// Label meta instances with the performance of selectors trained on
    /// those same instances.
    pub in_sample: bool,
    pub add_constants: bool,
    pub policy: CostPolicy,
    pub strict: bool,
    pub seed: u64,
}

impl Default for MetaOptions {
    fn default() -> Self {
        Self {
            inner_folds: 5,
            in_sample: false,
            add_constants: false,
            policy: CostPolicy::default(),
            strict: false,
            seed: 0,
        }
    }
}

/// A scenario whose choices are the pool's selectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaScenario {
    pub name: String,
    pub cutoff: f64,
    pub selector_ids: Vec<String>,
    pub features: Vec<Vec<Option<f64>>>,
    pub meta_performance: PerformanceMatrix,
    pub in_sample: bool,
}

/// Pairs every spec with its pool id.
pub fn named_specs(specs: &[SelectorSpec]) -> Vec<(String, SelectorSpec)> {
    member_ids(specs).into_iter().zip(specs.iter().cloned()).collect()
}

fn train_pool(s: &Scenario, named: &[(String, SelectorSpec)], rows: &[String], add_constants: bool) -> Result<SelectorPool, MetaError> {
    let trained = named
        .par_iter()
        .map(|(_, spec)| train_selector(spec, s, rows))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pool = SelectorPool::default();
    for ((id, _), t) in named.iter().zip(trained) {
        pool.push(id.clone(), PoolMember::Trained(Box::new(t)))?;
    }
    if add_constants {
        pool = add_constant_selectors(pool, s);
    }
    if pool.is_empty() {
        return Err(MetaError::EmptyPool);
    }
    Ok(pool)
}

/// Trains the pool on `train_rows` and labels every training row with the
/// realized performance of each member. Labels come from members trained on
/// the other inner folds unless `opts.in_sample` is set.
pub fn build_meta_scenario(
    train: &Scenario,
    specs: &[SelectorSpec],
    train_rows: &[String],
    opts: &MetaOptions,
) -> Result<(MetaScenario, SelectorPool), MetaError> {
    opts.policy.validate()?;
    let named = named_specs(specs);
    let pool = train_pool(train, &named, train_rows, opts.add_constants)?;
    let ms = meta_scenario_for_pool(train, &named, &pool, train_rows, opts)?;
    Ok((ms, pool))
}

/// Meta scenario for an already trained pool. `named` lists the specs of the
/// pool's trained members by pool id; they are retrained per inner fold.
pub fn meta_scenario_for_pool(
    train: &Scenario,
    named: &[(String, SelectorSpec)],
    pool: &SelectorPool,
    train_rows: &[String],
    opts: &MetaOptions,
) -> Result<MetaScenario, MetaError> {
    opts.policy.validate()?;
    if pool.is_empty() {
        return Err(MetaError::EmptyPool);
    }
    let table = base_par10(train);
    let meta_performance = if opts.in_sample {
        realize(train, &table, pool, train_rows, &opts.policy, opts.strict)?
    } else {
        inner_labels(train, &table, named, pool, train_rows, opts)?
    };
    let idx = row_indices(train, train_rows)?;
    Ok(MetaScenario {
        name: train.name.clone(),
        cutoff: train.cutoff,
        selector_ids: pool.ids(),
        features: idx.iter().map(|&i| train.features[i].clone()).collect(),
        meta_performance,
        in_sample: opts.in_sample,
    })
}

/// Out-of-sample labels. A member that cannot be trained on some inner fold
/// scores `10 C` on that fold's rows.
fn inner_labels(
    s: &Scenario,
    table: &[Vec<Option<f64>>],
    named: &[(String, SelectorSpec)],
    pool: &SelectorPool,
    train_rows: &[String],
    opts: &MetaOptions,
) -> Result<PerformanceMatrix, MetaError> {
    let n = train_rows.len();
    let protocol = Protocol {
        n_folds: opts.inner_folds.min(n),
        crop: 0,
        seed: opts.seed,
        use_fold_hints: false,
    };
    protocol.validate()?;
    let folds = make_folds(n, None, &protocol)?;
    let row_idx = row_indices(s, train_rows)?;
    let alg_index = s.algorithm_index();
    let per_fold = (0..protocol.n_folds)
        .into_par_iter()
        .map(|f| {
            let inner_train: Vec<String> = (0..n).filter(|&r| folds[r] != f).map(|r| train_rows[r].clone()).collect();
            let held: Vec<usize> = (0..n).filter(|&r| folds[r] == f).collect();
            let members = pool
                .members
                .iter()
                .map(|(id, m)| match m {
                    PoolMember::Constant { .. } => Ok(Some(m.clone())),
                    PoolMember::Trained(_) => {
                        let (_, spec) = named
                            .iter()
                            .find(|(n, _)| n == id)
                            .ok_or_else(|| MetaError::UnknownSelector(id.clone()))?;
                        match train_selector(spec, s, &inner_train) {
                            Ok(t) => Ok(Some(PoolMember::Trained(Box::new(t)))),
                            Err(e) => {
                                warn!("{id} failed on inner fold {f}: {e}; scoring 10C");
                                Ok(None)
                            }
                        }
                    }
                })
                .collect::<Result<Vec<_>, MetaError>>()?;
            let rows = held
                .iter()
                .map(|&r| {
                    let i = row_idx[r];
                    members
                        .iter()
                        .map(|m| match m {
                            None => Ok(10.0 * s.cutoff),
                            Some(m) => {
                                let a = m.select(&s.features[i])?;
                                let v = run_value(s, table, &alg_index, i, a, opts.strict)?;
                                Ok(charge(v, opts.policy.member_cost(s.feature_costs[i], m.uses_features()), s.cutoff))
                            }
                        })
                        .collect::<Result<Vec<f64>, MetaError>>()
                })
                .collect::<Result<Vec<_>, MetaError>>()?;
            Ok((held, rows))
        })
        .collect::<Result<Vec<_>, MetaError>>()?;
    let mut values = vec![Vec::new(); n];
    for (held, rows) in per_fold {
        for (r, v) in held.into_iter().zip(rows) {
            values[r] = v;
        }
    }
    Ok(PerformanceMatrix::new(train_rows.to_vec(), pool.ids(), values)?)
}

pub fn train_meta_selector(spec: &SelectorSpec, ms: &MetaScenario) -> Result<TrainedSelector, MetaError> {
    let data = TrainingSet::from_matrix(
        ms.selector_ids.clone(),
        ms.features.clone(),
        &ms.meta_performance.values,
        ms.cutoff,
    )?;
    Ok(train_on(spec, data)?)
}

/// First stage picks a pool member, second stage lets it pick the algorithm.
pub fn meta_select(meta: &TrainedSelector, pool: &SelectorPool, x: &[Option<f64>]) -> Result<(String, String), MetaError> {
    let id = meta.select(x)?;
    let member = pool.get(id).ok_or_else(|| MetaError::UnknownSelector(id.to_string()))?;
    Ok((id.to_string(), member.select(x)?.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aslib::scenario::tests::two_by_two;
    use crate::aslib::{Run, RunRecord, RunStatus};
    use crate::baselines::{oracle_assignment, single_best};
    use crate::ml::ForestConfig;
    use crate::selectors::Family;

    fn constants(s: &Scenario) -> SelectorPool {
        add_constant_selectors(SelectorPool::default(), s)
    }

    fn small(family: Family) -> SelectorSpec {
        let mut s = SelectorSpec::new(family).with_seed(3);
        s.hyper.forest = ForestConfig {
            n_trees: 8,
            min_leaf: 1,
            ..ForestConfig::default()
        };
        s.hyper.sunny_k = 3;
        s
    }

    /// Runtimes of A and B at feature value `x`.
    fn plant(x: f64) -> (f64, f64) {
        if x < 0.5 {
            (2.0, 40.0)
        } else {
            (40.0, 2.0)
        }
    }

    /// Two regimes on the first feature: A is fast below 0.5, B above.
    fn two_regimes(n: usize) -> Scenario {
        let mut s = two_by_two();
        s.instance_ids.clear();
        s.features.clear();
        s.runs.clear();
        for i in 0..n {
            let x = (i as f64 + 0.5) / n as f64;
            let id = format!("i{i:03}");
            let (ra, rb) = plant(x);
            for (alg, rt) in [("A", ra), ("B", rb)] {
                s.runs.push(Run {
                    instance: id.clone(),
                    algorithm: alg.into(),
                    repetition: 1,
                    record: RunRecord::new(rt, RunStatus::Ok),
                });
            }
            s.instance_ids.push(id);
            s.features.push(vec![Some(x)]);
        }
        s.feature_costs = vec![0.0; n];
        s
    }

    #[test]
    fn constant_pool_copies_columns() {
        let s = two_by_two();
        let m = realized_performance_matrix(&s, &constants(&s), &s.instance_ids, &CostPolicy::default()).unwrap();
        assert_eq!(m.col_ids, vec!["const:A", "const:B"]);
        assert_eq!(m.values, vec![vec![1.0, 1000.0], vec![1000.0, 1.0]]);
    }

    #[test]
    fn shared_feature_cost_counted_once() {
        let both = CostPolicy {
            include_feature_costs: true,
            share_between_levels: true,
        };
        let twice = CostPolicy {
            share_between_levels: false,
            ..both
        };
        let cost = 2.0;
        let member = both.member_cost(cost, true);
        assert_eq!(charge(10.0, member + both.meta_cost(cost, true), 100.0), 12.0);
        assert_eq!(charge(10.0, member + twice.meta_cost(cost, true), 100.0), 14.0);
        // constants do not compute features, so the meta level pays
        assert_eq!(both.member_cost(cost, false) + both.meta_cost(cost, false), 2.0);
        assert_eq!(charge(10.0, 101.0, 100.0), 1000.0);
        assert_eq!(
            CostPolicy {
                include_feature_costs: false,
                share_between_levels: true
            }
            .validate(),
            Err(MetaError::InvalidPolicy)
        );
    }

    #[test]
    fn feature_cost_above_cutoff_is_unsolved() {
        let mut s = two_by_two();
        s.feature_costs = vec![101.0, 0.0];
        let sel = train_selector(&small(Family::PAReg), &s, &s.instance_ids).unwrap();
        let mut pool = SelectorPool::default();
        pool.push("PAReg".into(), PoolMember::Trained(Box::new(sel))).unwrap();
        let policy = CostPolicy {
            include_feature_costs: true,
            share_between_levels: false,
        };
        let m = realized_performance_matrix(&s, &pool, &s.instance_ids, &policy).unwrap();
        assert_eq!(m.values[0][0], 1000.0);
    }

    #[test]
    fn missing_run_fills_or_fails() {
        let mut s = two_by_two();
        s.runs.retain(|r| !(r.instance == "i1" && r.algorithm == "B"));
        let table = base_par10(&s);
        let pool = constants(&s);
        let m = realize(&s, &table, &pool, &s.instance_ids, &CostPolicy::default(), false).unwrap();
        assert_eq!(m.values[0][1], 1000.0);
        assert!(matches!(
            realize(&s, &table, &pool, &s.instance_ids, &CostPolicy::default(), true),
            Err(MetaError::UnknownRun { .. })
        ));
    }

    #[test]
    fn constant_labels_ignore_inner_folds() {
        let s = two_regimes(12);
        let base = PerformanceMatrix::from_scenario(&s, &s.instance_ids).unwrap();
        for inner_folds in [2, 3, 5] {
            let opts = MetaOptions {
                inner_folds,
                add_constants: true,
                ..MetaOptions::default()
            };
            let (ms, pool) = build_meta_scenario(&s, &[], &s.instance_ids, &opts).unwrap();
            assert_eq!(pool.len(), 2);
            assert_eq!(ms.meta_performance.values, base.values);
        }
    }

    #[test]
    fn inner_labels_are_out_of_sample() {
        let s = two_regimes(4);
        let spec = small(Family::PAReg);
        let opts = MetaOptions {
            inner_folds: 2,
            seed: 9,
            ..MetaOptions::default()
        };
        let (ms, _) = build_meta_scenario(&s, std::slice::from_ref(&spec), &s.instance_ids, &opts).unwrap();
        let folds = make_folds(
            4,
            None,
            &Protocol {
                n_folds: 2,
                crop: 0,
                seed: 9,
                use_fold_hints: false,
            },
        )
        .unwrap();
        let table = base_par10(&s);
        for r in 0..4 {
            let other: Vec<String> = (0..4).filter(|&q| folds[q] != folds[r]).map(|q| s.instance_ids[q].clone()).collect();
            assert_eq!(other.len(), 2);
            let sel = train_selector(&spec, &s, &other).unwrap();
            let a = s.algorithm_index()[sel.select(&s.features[r]).unwrap()];
            assert_eq!(ms.meta_performance.values[r][0], table[r][a].unwrap());
        }
    }

    #[test]
    fn complementary_pool_restores_oracle() {
        let s = two_regimes(20);
        let (ms, _) = build_meta_scenario(
            &s,
            &[],
            &s.instance_ids,
            &MetaOptions {
                add_constants: true,
                ..MetaOptions::default()
            },
        )
        .unwrap();
        let base = PerformanceMatrix::from_scenario(&s, &s.instance_ids).unwrap();
        // brute-force per-instance minimum of the plant
        let plant = s
            .features
            .iter()
            .map(|f| {
                let (a, b) = plant(f[0].unwrap());
                a.min(b)
            })
            .sum::<f64>()
            / 20.0;
        let as_oracle = oracle_assignment(&ms.meta_performance).unwrap().mean;
        assert!((as_oracle - plant).abs() < 1e-9);
        assert!((as_oracle - oracle_assignment(&base).unwrap().mean).abs() < 1e-9);
        assert!(single_best(&ms.meta_performance).unwrap().1 <= single_best(&base).unwrap().1);
    }

    #[test]
    fn meta_picks_dominant_member() {
        let s = two_regimes(12);
        let mut pool = SelectorPool::default();
        pool.push("const:A".into(), PoolMember::Constant { algorithm: "A".into() }).unwrap();
        let ms = MetaScenario {
            name: "m".into(),
            cutoff: 100.0,
            selector_ids: vec!["good".into(), "bad".into()],
            features: s.features.clone(),
            meta_performance: PerformanceMatrix::new(
                s.instance_ids.clone(),
                vec!["good".into(), "bad".into()],
                vec![vec![1.0, 1000.0]; 12],
            )
            .unwrap(),
            in_sample: true,
        };
        for family in Family::ALL {
            let meta = train_meta_selector(&small(family), &ms).unwrap();
            for f in &s.features {
                assert_eq!(meta.select(f).unwrap(), "good", "{family}");
            }
            assert_eq!(meta, train_meta_selector(&small(family), &ms).unwrap());
        }
    }

    #[test]
    fn two_stage_selection() {
        let s = two_regimes(16);
        let specs = [small(Family::Isac), small(Family::PAReg)];
        let (ms, pool) = build_meta_scenario(
            &s,
            &specs,
            &s.instance_ids,
            &MetaOptions {
                add_constants: true,
                ..MetaOptions::default()
            },
        )
        .unwrap();
        assert_eq!(pool.ids(), vec!["ISAC", "PAReg", "const:A", "const:B"]);
        for family in Family::ALL {
            let meta = train_meta_selector(&small(family), &ms).unwrap();
            for f in &s.features {
                let (sid, alg) = meta_select(&meta, &pool, f).unwrap();
                assert!(pool.get(&sid).is_some());
                assert!(s.algorithm_ids.contains(&alg));
            }
        }
    }

    #[test]
    fn singleton_pool_delegates() {
        let s = two_regimes(12);
        let (ms, pool) = build_meta_scenario(&s, &[small(Family::Sunny)], &s.instance_ids, &MetaOptions::default()).unwrap();
        let meta = train_meta_selector(&small(Family::Mcc), &ms).unwrap();
        let PoolMember::Trained(only) = &pool.members[0].1 else { panic!() };
        for f in &s.features {
            assert_eq!(meta_select(&meta, &pool, f).unwrap().1, only.select(f).unwrap());
        }
    }

    #[test]
    fn unknown_selector_is_reported() {
        let s = two_regimes(12);
        let ms = MetaScenario {
            name: "m".into(),
            cutoff: 100.0,
            selector_ids: vec!["ghost".into()],
            features: s.features.clone(),
            meta_performance: PerformanceMatrix::new(s.instance_ids.clone(), vec!["ghost".into()], vec![vec![1.0]; 12]).unwrap(),
            in_sample: true,
        };
        let meta = train_meta_selector(&small(Family::PAReg), &ms).unwrap();
        assert_eq!(
            meta_select(&meta, &constants(&s), &s.features[0]),
            Err(MetaError::UnknownSelector("ghost".into()))
        );
    }

    #[test]
    fn augmentation_examples() {
        let s = two_regimes(10);
        let pool = constants(&s);
        assert_eq!(pool.ids(), vec!["const:A", "const:B"]);
        assert_eq!(add_constant_selectors(pool.clone(), &s), pool);
        assert_eq!(member_ids(&[small(Family::Mcc), small(Family::Mcc), small(Family::SatZilla11)]), vec![
            "MCC", "MCC#2", "SATzilla'11"
        ]);
    }
}
