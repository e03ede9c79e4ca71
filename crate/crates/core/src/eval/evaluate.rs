use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{
    ApproachReport, BaselineScore, Baselines, Brackets, EvalReport, FoldSummary, Level, Normalized, Provenance,
};
use super::{cropped_mean, make_folds, npar10, EvalError, Protocol};
use crate::aslib::Scenario;
use crate::baselines::{oracle_assignment, single_best, PerformanceMatrix};
use crate::meta::{
    add_constant_selectors, base_par10, charge, member_ids, meta_scenario_for_pool, meta_select, named_specs, realize,
    run_value, train_meta_selector, MetaError, MetaOptions, PoolMember, SelectorPool,
};
use crate::ml::derive_seed;
use crate::selectors::{train_selector, SelectorSpec};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvalConfig {
    pub protocol: Protocol,
    pub meta: MetaOptions,
}

/// Everything measured on one outer test fold.
#[derive(Debug, Clone)]
struct FoldResult {
    n_train: usize,
    n_test: usize,
    oracle: f64,
    sbs: f64,
    sbs_choice: String,
    as_oracle: f64,
    sbas: f64,
    sbas_choice: String,
    base: Vec<Result<f64, String>>,
    meta: Vec<Result<f64, String>>,
    pool: Vec<(String, f64)>,
}

fn fold_error(fold: usize) -> impl Fn(MetaError) -> EvalError {
    move |e| EvalError::Fold {
        fold,
        message: e.to_string(),
    }
}

/// Cross-validated evaluation of base selectors, meta selectors and the four
/// baselines. Failures of single approaches are recorded in the report.
pub fn evaluate(
    s: &Scenario,
    base_specs: &[SelectorSpec],
    meta_specs: &[SelectorSpec],
    cfg: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    cfg.protocol.validate()?;
    let violations = s.validate();
    if !violations.is_empty() {
        return Err(EvalError::InvalidScenario(violations));
    }
    let folds = make_folds(s.n_instances(), s.fold_hints.as_deref(), &cfg.protocol)?;
    let n_folds = folds.iter().max().map_or(0, |m| m + 1);
    if n_folds <= 2 * cfg.protocol.crop {
        return Err(EvalError::InvalidProtocol(format!(
            "{n_folds} folds cannot be cropped by {} from each end",
            cfg.protocol.crop
        )));
    }
    let table = base_par10(s);
    let results = (0..n_folds)
        .into_par_iter()
        .map(|f| run_fold(s, &table, &folds, f, base_specs, meta_specs, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    assemble(s, base_specs, meta_specs, cfg, &results)
}

fn run_fold(
    s: &Scenario,
    table: &[Vec<Option<f64>>],
    folds: &[usize],
    f: usize,
    base_specs: &[SelectorSpec],
    meta_specs: &[SelectorSpec],
    cfg: &EvalConfig,
) -> Result<FoldResult, EvalError> {
    let err = fold_error(f);
    let (test_rows, train_rows): (Vec<String>, Vec<String>) = {
        let (te, tr): (Vec<_>, Vec<_>) = s.instance_ids.iter().zip(folds).partition(|(_, &k)| k == f);
        (te.into_iter().map(|(id, _)| id.clone()).collect(), tr.into_iter().map(|(id, _)| id.clone()).collect())
    };
    if test_rows.is_empty() || train_rows.is_empty() {
        return Err(EvalError::Fold {
            fold: f,
            message: "empty train or test split".into(),
        });
    }
    let base_train = PerformanceMatrix::from_scenario(s, &train_rows).map_err(|e| err(e.into()))?;
    let base_test = PerformanceMatrix::from_scenario(s, &test_rows).map_err(|e| err(e.into()))?;
    let oracle = oracle_assignment(&base_test).map_err(|e| err(e.into()))?.mean;
    let (sbs_choice, _) = single_best(&base_train).map_err(|e| err(e.into()))?;
    let sbs = base_test.column_mean(base_test.col_index(&sbs_choice).expect("same columns"));

    let named = named_specs(base_specs);
    let trained: Vec<_> = named.par_iter().map(|(_, spec)| train_selector(spec, s, &train_rows)).collect();
    let mut pool = SelectorPool::default();
    let mut surviving = Vec::new();
    let mut base_status = Vec::new();
    for ((id, spec), t) in named.iter().zip(trained) {
        match t {
            Ok(t) => {
                pool.push(id.clone(), PoolMember::Trained(Box::new(t))).map_err(&err)?;
                surviving.push((id.clone(), spec.clone()));
                base_status.push(Ok(()));
            }
            Err(e) => base_status.push(Err(e.to_string())),
        }
    }
    if cfg.meta.add_constants {
        pool = add_constant_selectors(pool, s);
    }
    let opts = MetaOptions {
        seed: derive_seed(cfg.meta.seed, f as u64),
        ..cfg.meta.clone()
    };
    let ms = meta_scenario_for_pool(s, &surviving, &pool, &train_rows, &opts).map_err(&err)?;
    let meta_test = realize(s, table, &pool, &test_rows, &opts.policy, opts.strict).map_err(&err)?;
    let as_oracle = oracle_assignment(&meta_test).map_err(|e| err(e.into()))?.mean;
    let (sbas_choice, _) = single_best(&ms.meta_performance).map_err(|e| err(e.into()))?;
    let col_mean = |id: &str| meta_test.column_mean(meta_test.col_index(id).expect("pool column"));
    let sbas = col_mean(&sbas_choice);

    let base = named
        .iter()
        .zip(base_status)
        .map(|((id, _), st)| st.map(|_| col_mean(id)))
        .collect();

    let index = s.instance_index();
    let alg_index = s.algorithm_index();
    let test_idx: Vec<usize> = test_rows.iter().map(|id| index[id.as_str()]).collect();
    let meta = meta_specs
        .par_iter()
        .map(|spec| {
            let m = train_meta_selector(spec, &ms)?;
            let mut total = 0.0;
            for &i in &test_idx {
                let (sid, alg) = meta_select(&m, &pool, &s.features[i])?;
                let uses = pool.get(&sid).is_some_and(PoolMember::uses_features);
                let v = run_value(s, table, &alg_index, i, &alg, opts.strict)?;
                let c = s.feature_costs[i];
                total += charge(v, opts.policy.member_cost(c, uses) + opts.policy.meta_cost(c, uses), s.cutoff);
            }
            Ok::<f64, MetaError>(total / test_idx.len() as f64)
        })
        .map(|r| r.map_err(|e| e.to_string()))
        .collect();

    let pool_scores = pool.ids().into_iter().map(|id| {
        let v = col_mean(&id);
        (id, v)
    });
    Ok(FoldResult {
        n_train: train_rows.len(),
        n_test: test_rows.len(),
        oracle,
        sbs,
        sbs_choice,
        as_oracle,
        sbas,
        sbas_choice,
        base,
        meta,
        pool: pool_scores.collect(),
    })
}

fn normalized(score: f64, low: f64, high: f64) -> Normalized {
    match npar10(score, low, high) {
        Ok(v) => Normalized::Value(v),
        Err(_) => Normalized::Degenerate,
    }
}

fn approach(name: String, level: Level, per_fold: Vec<Result<f64, String>>, crop: usize) -> ApproachReport {
    let failure = per_fold
        .iter()
        .enumerate()
        .find_map(|(k, r)| r.as_ref().err().map(|e| format!("fold {k}: {e}")));
    let per_fold_par10: Vec<f64> = per_fold.into_iter().filter_map(Result::ok).collect();
    let cropped_par10 = if failure.is_none() {
        cropped_mean(&per_fold_par10, crop).ok()
    } else {
        None
    };
    ApproachReport {
        name,
        level,
        failure,
        per_fold_par10,
        cropped_par10,
        npar10: None,
        npar10_meta: None,
        brackets: None,
    }
}

fn assemble(
    s: &Scenario,
    base_specs: &[SelectorSpec],
    meta_specs: &[SelectorSpec],
    cfg: &EvalConfig,
    results: &[FoldResult],
) -> Result<EvalReport, EvalError> {
    let crop = cfg.protocol.crop;
    let series = |get: fn(&FoldResult) -> f64| -> Result<(Vec<f64>, f64), EvalError> {
        let v: Vec<f64> = results.iter().map(get).collect();
        let m = cropped_mean(&v, crop)?;
        Ok((v, m))
    };
    let (oracle_f, oracle) = series(|r| r.oracle)?;
    let (sbs_f, sbs) = series(|r| r.sbs)?;
    let (as_oracle_f, as_oracle) = series(|r| r.as_oracle)?;
    let (sbas_f, sbas) = series(|r| r.sbas)?;
    let score = |per_fold, cropped| BaselineScore {
        per_fold,
        cropped_par10: cropped,
        npar10: normalized(cropped, oracle, sbs),
    };
    let baselines = Baselines {
        oracle: score(oracle_f, oracle),
        sbs: score(sbs_f, sbs),
        as_oracle: score(as_oracle_f, as_oracle),
        sbas: score(sbas_f, sbas),
        sbs_choices: results.iter().map(|r| r.sbs_choice.clone()).collect(),
        sbas_choices: results.iter().map(|r| r.sbas_choice.clone()).collect(),
    };

    let mut approaches: Vec<ApproachReport> = member_ids(base_specs)
        .into_iter()
        .enumerate()
        .map(|(j, id)| approach(id, Level::Base, results.iter().map(|r| r.base[j].clone()).collect(), crop))
        .collect();
    for a in &mut approaches {
        a.npar10 = a.cropped_par10.map(|v| normalized(v, oracle, sbs));
    }
    let base_scores: Vec<f64> = approaches.iter().filter_map(|a| a.cropped_par10).collect();
    for (j, id) in member_ids(meta_specs).into_iter().enumerate() {
        let mut a = approach(id, Level::Meta, results.iter().map(|r| r.meta[j].clone()).collect(), crop);
        if let Some(v) = a.cropped_par10 {
            a.npar10 = Some(normalized(v, oracle, sbs));
            a.npar10_meta = Some(normalized(v, as_oracle, sbas));
            let at_least_as_good = base_scores.iter().filter(|&&b| v <= b).count();
            a.brackets = Some(Brackets {
                at_least_as_good,
                worse: base_scores.len() - at_least_as_good,
            });
        }
        approaches.push(a);
    }

    let pool = results[0]
        .pool
        .iter()
        .map(|(id, _)| {
            let per_fold = results
                .iter()
                .map(|r| {
                    r.pool
                        .iter()
                        .find(|(m, _)| m == id)
                        .map(|(_, v)| *v)
                        .ok_or_else(|| "not in this fold's pool".to_string())
                })
                .collect();
            let mut a = approach(id.clone(), Level::Base, per_fold, crop);
            a.npar10 = a.cropped_par10.map(|v| normalized(v, oracle, sbs));
            a
        })
        .collect();

    Ok(EvalReport {
        scenario: s.name.clone(),
        baselines,
        approaches,
        pool,
        provenance: Provenance {
            seed: cfg.protocol.seed,
            protocol: cfg.protocol.clone(),
            meta_options: cfg.meta.clone(),
            base_specs: base_specs.to_vec(),
            meta_specs: meta_specs.to_vec(),
            normalization: "nPAR10 of cropped-mean PAR10 (one normalization, no per-fold averaging)".into(),
            folds: results
                .iter()
                .enumerate()
                .map(|(fold, r)| FoldSummary {
                    fold,
                    n_train: r.n_train,
                    n_test: r.n_test,
                })
                .collect(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{emit_report, ReportFormat};
    use crate::ml::ForestConfig;
    use crate::selectors::Family;
    use crate::synth::{generate_scenario, SynthConfig};

    fn spec(family: Family, seed: u64) -> SelectorSpec {
        let mut s = SelectorSpec::new(family).with_seed(seed);
        s.hyper.forest = ForestConfig {
            n_trees: 8,
            ..ForestConfig::default()
        };
        s.hyper.sunny_k = 5;
        s
    }

    fn config(add_constants: bool) -> EvalConfig {
        EvalConfig {
            protocol: Protocol {
                n_folds: 5,
                crop: 1,
                seed: 4,
                use_fold_hints: false,
            },
            meta: MetaOptions {
                inner_folds: 3,
                add_constants,
                ..MetaOptions::default()
            },
        }
    }

    fn planted(n: usize) -> Scenario {
        generate_scenario(&SynthConfig {
            n_instances: n,
            n_algorithms: 3,
            regime_count: 3,
            d_features: 2,
            ..SynthConfig::default()
        })
        .unwrap()
        .0
    }

    #[test]
    fn dominant_algorithm_collapses_the_gap() {
        let (s, _) = generate_scenario(&SynthConfig {
            n_instances: 40,
            regime_count: 1,
            noise_std: 0.0,
            ..SynthConfig::default()
        })
        .unwrap();
        let r = evaluate(&s, &[spec(Family::PAReg, 1)], &[spec(Family::Sunny, 2)], &config(false)).unwrap();
        for a in &r.approaches {
            assert_eq!(a.npar10, Some(Normalized::Degenerate), "{}", a.name);
        }
        assert_eq!(r.baselines.sbs.npar10, Normalized::Degenerate);
    }

    #[test]
    fn report_invariants() {
        let s = planted(60);
        let base = [spec(Family::PAReg, 1), spec(Family::Isac, 2)];
        let meta = [spec(Family::Sunny, 3), spec(Family::Mcc, 4)];
        let r = evaluate(&s, &base, &meta, &config(true)).unwrap();

        assert_eq!(r.baselines.oracle.npar10, Normalized::Value(0.0));
        assert_eq!(r.baselines.sbs.npar10, Normalized::Value(1.0));
        let b = &r.baselines;
        for k in 0..5 {
            assert!(b.oracle.per_fold[k] <= b.as_oracle.per_fold[k] + 1e-9);
            assert!(b.as_oracle.per_fold[k] <= b.sbas.per_fold[k] + 1e-9);
            for a in &r.approaches {
                assert!(b.oracle.per_fold[k] <= a.per_fold_par10[k] + 1e-9);
            }
        }
        // constants in the pool restore the base oracle
        for k in 0..5 {
            assert!((b.oracle.per_fold[k] - b.as_oracle.per_fold[k]).abs() < 1e-9);
        }
        for a in r.approaches.iter().filter(|a| a.level == Level::Meta) {
            let br = a.brackets.unwrap();
            assert_eq!(br.at_least_as_good + br.worse, base.len());
        }
        assert_eq!(r.pool.len(), 2 + 3);
        assert_eq!(r.provenance.folds.iter().map(|f| f.n_test).sum::<usize>(), 60);
    }

    #[test]
    fn deterministic_json() {
        let s = planted(40);
        let run = || {
            let r = evaluate(&s, &[spec(Family::R2SPar10, 1)], &[spec(Family::SatZilla11, 2)], &config(false)).unwrap();
            emit_report(&r, ReportFormat::Json)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn emitted_formats() {
        let s = planted(40);
        let r = evaluate(&s, &[spec(Family::PAReg, 1)], &[spec(Family::Isac, 2)], &config(false)).unwrap();
        let json = emit_report(&r, ReportFormat::Json);
        let back: EvalReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);

        let md = emit_report(&r, ReportFormat::Markdown);
        let rows = md.lines().filter(|l| l.starts_with("| ")).count() - 1;
        assert_eq!(rows, r.approaches.len() + 4);
        // the best approach is bolded, ties included
        let bolded = md.matches("**").count();
        assert!(bolded >= 2 && bolded.is_multiple_of(2));

        let csv = emit_report(&r, ReportFormat::Csv);
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        assert_eq!(reader.headers().unwrap(), vec!["scenario", "approach", "metric", "value"]);
        assert!(reader.records().all(|rec| rec.unwrap().len() == 4));
    }

    #[test]
    fn failing_approach_is_recorded() {
        let s = planted(40);
        let mut bad = spec(Family::Sunny, 2);
        bad.hyper.sunny_k = 0;
        let r = evaluate(&s, &[spec(Family::PAReg, 1), bad], &[spec(Family::Mcc, 3)], &config(false)).unwrap();
        let failed = r.approaches.iter().find(|a| a.name == "SUNNY").unwrap();
        assert!(failed.failure.is_some());
        assert!(failed.cropped_par10.is_none());
        let meta = r.approaches.iter().find(|a| a.level == Level::Meta).unwrap();
        assert!(meta.succeeded());
        assert_eq!(meta.brackets.map(|b| b.at_least_as_good + b.worse), Some(1));
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = planted(8);
        assert!(matches!(
            evaluate(&s, &[spec(Family::PAReg, 1)], &[], &EvalConfig::default()),
            Err(EvalError::TooFewInstances { .. })
        ));
        let mut broken = planted(20);
        broken.cutoff = -1.0;
        assert!(matches!(
            evaluate(&broken, &[spec(Family::PAReg, 1)], &[], &config(false)),
            Err(EvalError::InvalidScenario(_))
        ));
    }
}
