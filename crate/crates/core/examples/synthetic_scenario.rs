//! Generate a planted scenario, save it in ASlib layout, and load it again.
//!
//! Usage: cargo run --example synthetic_scenario [OUT_DIR]

use metaselect::aslib::load_scenario;
use metaselect::baselines::{oracle_assignment, single_best, PerformanceMatrix};
use metaselect::synth::{generate_scenario, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SynthConfig {
        n_instances: 300,
        n_algorithms: 4,
        regime_count: 3,
        noise_std: 0.2,
        censor_rate: 0.05,
        seed: 7,
        ..SynthConfig::default()
    };
    let (scenario, truth) = generate_scenario(&cfg)?;

    let all = scenario.instance_ids.clone();
    let perf = PerformanceMatrix::from_scenario(&scenario, &all)?;
    let oracle = oracle_assignment(&perf)?;
    let (sbs, sbs_mean) = single_best(&perf)?;
    let agree = oracle
        .choices
        .iter()
        .zip(&truth.best_algorithm)
        .filter(|(c, t)| c == t)
        .count();
    println!("{}: {} instances, {} algorithms", scenario.name, scenario.n_instances(), scenario.n_algorithms());
    println!("oracle PAR10 {:.2}, single best {sbs} at {sbs_mean:.2}", oracle.mean);
    println!("oracle matches the planted best algorithm on {agree}/{} instances", scenario.n_instances());

    let dir = match std::env::args().nth(1) {
        Some(d) => std::path::PathBuf::from(d),
        None => std::env::temp_dir().join(&scenario.name),
    };
    metaselect::aslib::write_scenario(&scenario, &dir)?;
    let back = load_scenario(&dir)?;
    println!("wrote {} and read back {} runs", dir.display(), back.runs.len());
    Ok(())
}
