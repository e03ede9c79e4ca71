//! Full cross-validated study on one scenario: base and meta selectors,
//! cropped means, normalized scores, and the three report formats.
//!
//! Usage: cargo run --release --example cross_validation [ASLIB_DIR]

use metaselect::aslib::load_scenario;
use metaselect::eval::{emit_report, evaluate, EvalConfig, Protocol, ReportFormat};
use metaselect::meta::MetaOptions;
use metaselect::ml::{derive_seed, ForestConfig};
use metaselect::selectors::{Family, SelectorSpec};
use metaselect::synth::{generate_scenario, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = match std::env::args().nth(1) {
        Some(dir) => load_scenario(dir)?,
        None => generate_scenario(&SynthConfig { n_instances: 200, seed: 4, ..SynthConfig::default() })?.0,
    };
    let seed = 2024;
    let specs = |families: &[Family], offset: u64| -> Vec<SelectorSpec> {
        families
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                let mut s = SelectorSpec::new(f).with_seed(derive_seed(seed, offset + i as u64));
                s.hyper.forest = ForestConfig { n_trees: 20, ..ForestConfig::default() };
                s
            })
            .collect()
    };
    let base = specs(&[Family::PAReg, Family::Mcc, Family::Sunny, Family::R2SPar10], 0);
    let meta = specs(&[Family::Sunny, Family::SatZilla11], 1000);
    let cfg = EvalConfig {
        protocol: Protocol { seed, ..Protocol::default() },
        meta: MetaOptions { seed, ..MetaOptions::default() },
    };
    let report = evaluate(&scenario, &base, &meta, &cfg)?;
    print!("{}", emit_report(&report, ReportFormat::Markdown));
    println!();
    print!("{}", emit_report(&report, ReportFormat::Csv).lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    Ok(())
}
