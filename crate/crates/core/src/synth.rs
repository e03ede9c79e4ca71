//! Synthetic scenarios with planted structure. The first feature is cut into
//! `regime_count` equal intervals; in interval `r` algorithm `r` is fast and
//! every other algorithm is slow.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aslib::{Run, RunRecord, RunStatus, Scenario};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid synthetic config: {0}")]
pub struct InvalidConfig(pub String);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_instances: usize,
    pub d_features: usize,
    pub n_algorithms: usize,
    pub regime_count: usize,
    /// Standard deviation of the log-runtime noise.
    pub noise_std: f64,
    /// Probability that a run is recorded as a timeout regardless of runtime.
    pub censor_rate: f64,
    pub cutoff: f64,
    pub seed: u64,
    /// Runtime of the regime's best algorithm, as a fraction of the cutoff.
    pub fast_fraction: f64,
    /// Runtime of every other algorithm, as a fraction of the cutoff.
    pub slow_fraction: f64,
    /// Feature computation time charged per instance.
    pub feature_cost: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_instances: 200,
            d_features: 4,
            n_algorithms: 3,
            regime_count: 3,
            noise_std: 0.1,
            censor_rate: 0.0,
            cutoff: 100.0,
            seed: 0,
            fast_fraction: 0.05,
            slow_fraction: 0.5,
            feature_cost: 0.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), InvalidConfig> {
        let bad = |m: &str| Err(InvalidConfig(m.to_string()));
        if self.n_instances == 0 || self.d_features == 0 || self.n_algorithms == 0 {
            return bad("instance, feature and algorithm counts must be positive");
        }
        if self.regime_count == 0 || self.regime_count > self.n_algorithms {
            return bad("regime_count must be between 1 and n_algorithms");
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return bad("noise_std must be finite and nonnegative");
        }
        if !(0.0..=1.0).contains(&self.censor_rate) {
            return bad("censor_rate must lie in [0, 1]");
        }
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return bad("cutoff must be positive");
        }
        if !(0.0 < self.fast_fraction && self.fast_fraction < self.slow_fraction && self.slow_fraction <= 1.0) {
            return bad("need 0 < fast_fraction < slow_fraction <= 1");
        }
        if !(self.feature_cost.is_finite() && self.feature_cost >= 0.0) {
            return bad("feature_cost must be finite and nonnegative");
        }
        Ok(())
    }

    /// Regime of a first-feature value.
    pub fn regime_of(&self, x0: f64) -> usize {
        ((x0 * self.regime_count as f64).floor() as usize).min(self.regime_count - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub regime: Vec<usize>,
    pub best_algorithm: Vec<String>,
    /// Noise-free runtime per `[instance][algorithm]`.
    pub true_runtimes: Vec<Vec<f64>>,
}

pub fn algorithm_id(a: usize, n_algorithms: usize) -> String {
    let width = (n_algorithms.saturating_sub(1)).to_string().len();
    format!("alg{a:0width$}")
}

pub fn generate_scenario(cfg: &SynthConfig) -> Result<(Scenario, GroundTruth), InvalidConfig> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_instances;
    let m = cfg.n_algorithms;
    let width = (n - 1).to_string().len();
    let instance_ids: Vec<String> = (0..n).map(|i| format!("inst{i:0width$}")).collect();
    let algorithm_ids: Vec<String> = (0..m).map(|a| algorithm_id(a, m)).collect();

    // Stratified first feature, so every regime gets its exact share.
    let mut strata: Vec<usize> = (0..n).collect();
    strata.shuffle(&mut rng);
    let features: Vec<Vec<f64>> = strata
        .iter()
        .map(|&k| {
            let mut row = vec![(k as f64 + 0.5) / n as f64];
            row.extend((1..cfg.d_features).map(|_| rng.random::<f64>()));
            row
        })
        .collect();

    let fast = cfg.fast_fraction * cfg.cutoff;
    let slow = cfg.slow_fraction * cfg.cutoff;
    let regime: Vec<usize> = features.iter().map(|f| cfg.regime_of(f[0])).collect();
    let true_runtimes: Vec<Vec<f64>> = regime
        .iter()
        .map(|&r| (0..m).map(|a| if a == r { fast } else { slow }).collect())
        .collect();

    let mut runs = Vec::with_capacity(n * m);
    for (i, truth) in true_runtimes.iter().enumerate() {
        for (a, &t) in truth.iter().enumerate() {
            let z: f64 = StandardNormal.sample(&mut rng);
            let observed = t * (cfg.noise_std * z).exp();
            let censored = rng.random::<f64>() < cfg.censor_rate;
            let record = if censored || observed > cfg.cutoff {
                RunRecord::new(cfg.cutoff, RunStatus::Timeout)
            } else {
                RunRecord::new(observed, RunStatus::Ok)
            };
            runs.push(Run {
                instance: instance_ids[i].clone(),
                algorithm: algorithm_ids[a].clone(),
                repetition: 1,
                record,
            });
        }
    }

    let scenario = Scenario {
        name: format!("synthetic-r{}-s{}", cfg.regime_count, cfg.seed),
        instance_ids,
        algorithm_ids: algorithm_ids.clone(),
        cutoff: cfg.cutoff,
        runs,
        feature_names: (0..cfg.d_features).map(|j| format!("f{j}")).collect(),
        features: features.into_iter().map(|r| r.into_iter().map(Some).collect()).collect(),
        feature_costs: vec![cfg.feature_cost; n],
        fold_hints: None,
    };
    let truth = GroundTruth {
        best_algorithm: regime.iter().map(|&r| algorithm_ids[r].clone()).collect(),
        regime,
        true_runtimes,
    };
    Ok((scenario, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{oracle_assignment, single_best, PerformanceMatrix};
    use proptest::prelude::*;

    fn matrix(s: &Scenario) -> PerformanceMatrix {
        PerformanceMatrix::from_scenario(s, &s.instance_ids).unwrap()
    }

    #[test]
    fn noiseless_oracle_matches_plant() {
        let cfg = SynthConfig {
            regime_count: 2,
            n_algorithms: 3,
            noise_std: 0.0,
            ..SynthConfig::default()
        };
        let (s, truth) = generate_scenario(&cfg).unwrap();
        assert!(s.validate().is_empty());
        assert_eq!(oracle_assignment(&matrix(&s)).unwrap().choices, truth.best_algorithm);
    }

    #[test]
    fn full_censoring() {
        let cfg = SynthConfig {
            censor_rate: 1.0,
            ..SynthConfig::default()
        };
        let (s, _) = generate_scenario(&cfg).unwrap();
        assert!(s.runs.iter().all(|r| r.record.status == RunStatus::Timeout));
        assert_eq!(oracle_assignment(&matrix(&s)).unwrap().mean, 10.0 * cfg.cutoff);
    }

    #[test]
    fn single_regime_has_no_gap() {
        let gap = |noise: f64| {
            let cfg = SynthConfig {
                regime_count: 1,
                noise_std: noise,
                ..SynthConfig::default()
            };
            let p = matrix(&generate_scenario(&cfg).unwrap().0);
            single_best(&p).unwrap().1 - oracle_assignment(&p).unwrap().mean
        };
        assert_eq!(gap(0.0), 0.0);
        assert!(gap(1e-4).abs() < 1e-9);
        // heavy noise lets other algorithms win some instances
        assert!(gap(1.5) > 0.0);
    }

    #[test]
    fn regime_shares_are_exact() {
        let cfg = SynthConfig {
            n_instances: 30,
            regime_count: 3,
            ..SynthConfig::default()
        };
        let (_, truth) = generate_scenario(&cfg).unwrap();
        for r in 0..3 {
            assert_eq!(truth.regime.iter().filter(|&&x| x == r).count(), 10);
        }
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let cfg = SynthConfig::default();
        assert_eq!(generate_scenario(&cfg).unwrap(), generate_scenario(&cfg).unwrap());
        let other = SynthConfig { seed: 1, ..cfg };
        assert_ne!(generate_scenario(&other).unwrap().0, generate_scenario(&SynthConfig::default()).unwrap().0);
    }

    #[test]
    fn invalid_configs() {
        for cfg in [
            SynthConfig { regime_count: 4, ..SynthConfig::default() },
            SynthConfig { censor_rate: 1.5, ..SynthConfig::default() },
            SynthConfig { n_instances: 0, ..SynthConfig::default() },
            SynthConfig { cutoff: 0.0, ..SynthConfig::default() },
            SynthConfig { fast_fraction: 0.6, ..SynthConfig::default() },
        ] {
            assert!(generate_scenario(&cfg).is_err());
        }
    }

    #[test]
    fn ids_sort_like_indices() {
        assert_eq!(algorithm_id(3, 12), "alg03");
        assert_eq!(algorithm_id(3, 4), "alg3");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn more_regimes_never_shrink_the_gap(n in 10usize..120, m in 2usize..7, seed in any::<u64>()) {
            let mut last = -1.0;
            for r in 1..=m {
                let cfg = SynthConfig {
                    n_instances: n,
                    n_algorithms: m,
                    regime_count: r,
                    noise_std: 0.0,
                    seed,
                    ..SynthConfig::default()
                };
                let p = matrix(&generate_scenario(&cfg).unwrap().0);
                let gap = single_best(&p).unwrap().1 - oracle_assignment(&p).unwrap().mean;
                prop_assert!(gap >= last - 1e-9, "regimes {r}: gap {gap} < {last}");
                last = gap;
            }
        }
    }
}
