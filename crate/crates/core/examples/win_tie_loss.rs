//! Evaluate the same approaches on several scenarios and summarize how often
//! each meta selector beats, ties or loses to each base selector.

use metaselect::eval::{evaluate, wtl_markdown, wtl_table, EvalConfig, DEFAULT_TIE_EPS};
use metaselect::meta::MetaOptions;
use metaselect::ml::ForestConfig;
use metaselect::selectors::{Family, SelectorSpec};
use metaselect::synth::{generate_scenario, SynthConfig};

fn spec(f: Family) -> SelectorSpec {
    let mut s = SelectorSpec::new(f);
    s.hyper.forest = ForestConfig { n_trees: 10, ..ForestConfig::default() };
    s
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = [spec(Family::PAReg), spec(Family::Isac), spec(Family::Sunny)];
    let meta = [spec(Family::Mcc), spec(Family::R2SExp)];
    let mut reports = Vec::new();
    for seed in 0..5 {
        let (s, _) = generate_scenario(&SynthConfig {
            n_instances: 120,
            regime_count: 1 + seed as usize % 3,
            noise_std: 0.2 + 0.2 * seed as f64,
            seed,
            ..SynthConfig::default()
        })?;
        let cfg = EvalConfig { meta: MetaOptions { add_constants: true, ..MetaOptions::default() }, ..EvalConfig::default() };
        reports.push(evaluate(&s, &base, &meta, &cfg)?);
        eprintln!("evaluated {}", s.name);
    }
    print!("{}", wtl_markdown(&wtl_table(&reports, DEFAULT_TIE_EPS)));
    Ok(())
}
