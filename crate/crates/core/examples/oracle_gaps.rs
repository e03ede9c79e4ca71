//! How much does the best selector per instance lose against the best
//! algorithm per instance? Compares oracle, AS-oracle, SBAS and SBS over
//! cross-validation, with and without constant selectors in the pool.

use metaselect::eval::{evaluate, EvalConfig};
use metaselect::meta::MetaOptions;
use metaselect::ml::ForestConfig;
use metaselect::selectors::{Family, SelectorSpec};
use metaselect::synth::{generate_scenario, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (s, _) = generate_scenario(&SynthConfig {
        n_instances: 250,
        n_algorithms: 4,
        regime_count: 4,
        noise_std: 0.5,
        seed: 3,
        ..SynthConfig::default()
    })?;
    let base: Vec<SelectorSpec> = [Family::PAReg, Family::Isac, Family::SatZilla11]
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            let mut spec = SelectorSpec::new(f).with_seed(i as u64);
            spec.hyper.forest = ForestConfig { n_trees: 15, ..ForestConfig::default() };
            spec
        })
        .collect();
    println!("{:<10} {:>9} {:>9} {:>9} {:>9}", "constants", "oracle", "AS-oracle", "SBAS", "SBS");
    for constants in [false, true] {
        let cfg = EvalConfig {
            meta: MetaOptions { add_constants: constants, ..MetaOptions::default() },
            ..EvalConfig::default()
        };
        let b = evaluate(&s, &base, &[], &cfg)?.baselines;
        println!(
            "{:<10} {:>9.2} {:>9.2} {:>9.2} {:>9.2}",
            constants, b.oracle.cropped_par10, b.as_oracle.cropped_par10, b.sbas.cropped_par10, b.sbs.cropped_par10
        );
    }
    Ok(())
}
