//! Train each of the seven selector families on one split and compare their
//! test PAR10 with the oracle and the single best solver.

use metaselect::baselines::{oracle_assignment, single_best, PerformanceMatrix};
use metaselect::ml::ForestConfig;
use metaselect::selectors::{train_selector, Family, SelectorSpec};
use metaselect::synth::{generate_scenario, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (s, _) = generate_scenario(&SynthConfig {
        n_instances: 400,
        n_algorithms: 3,
        regime_count: 3,
        noise_std: 0.3,
        seed: 1,
        ..SynthConfig::default()
    })?;
    let (train, test): (Vec<String>, Vec<String>) = {
        let (a, b): (Vec<_>, Vec<_>) = s.instance_ids.iter().enumerate().partition(|(i, _)| i % 4 != 0);
        (a.into_iter().map(|(_, id)| id.clone()).collect(), b.into_iter().map(|(_, id)| id.clone()).collect())
    };
    let test_perf = PerformanceMatrix::from_scenario(&s, &test)?;
    let (sbs, _) = single_best(&PerformanceMatrix::from_scenario(&s, &train)?)?;
    println!("{:<12} {:>10}", "approach", "test PAR10");
    println!("{:<12} {:>10.2}", "oracle", oracle_assignment(&test_perf)?.mean);
    println!("{:<12} {:>10.2}", format!("SBS ({sbs})"), test_perf.column_mean(test_perf.col_index(&sbs).unwrap()));

    let index = s.instance_index();
    for family in Family::ALL {
        let mut spec = SelectorSpec::new(family).with_seed(3);
        spec.hyper.forest = ForestConfig { n_trees: 30, ..ForestConfig::default() };
        let sel = train_selector(&spec, &s, &train)?;
        let choices = test
            .iter()
            .map(|id| {
                let pick = sel.select(&s.features[index[id.as_str()]])?;
                Ok(test_perf.col_index(pick).unwrap())
            })
            .collect::<Result<Vec<_>, metaselect::selectors::SelectorError>>()?;
        println!("{:<12} {:>10.2}", family.display_name(), test_perf.mean_of_choices(&choices));
    }
    Ok(())
}
