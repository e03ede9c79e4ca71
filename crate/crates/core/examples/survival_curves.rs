//! Kaplan-Meier curves from censored runtimes, the two risk scores built on
//! them, and a survival forest conditioned on a feature.

use metaselect::ml::{curve_risk, fit_survival_forest, km_estimate, ForestConfig, RiskMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cutoff = 10.0;
    // Runtimes of one solver; `true` marks a run stopped at the cutoff.
    let times = [1.0, 2.5, 2.5, 4.0, 10.0, 10.0, 6.0, 10.0];
    let censored = [false, false, false, false, true, true, false, true];
    let km = km_estimate(&times, &censored)?;
    println!("t      S(t)");
    for (t, s) in km.breakpoints.iter().zip(&km.values) {
        println!("{t:<6} {s:.4}");
    }
    println!(
        "expected runtime {:.3}, expected PAR10 {:.3}",
        curve_risk(&km, cutoff, RiskMode::ExpectedRuntime),
        curve_risk(&km, cutoff, RiskMode::ExpectedPar10)
    );

    // Small feature values run fast, large ones time out.
    let x: Vec<Vec<f64>> = (0..60).map(|i| vec![i as f64 / 60.0]).collect();
    let t: Vec<f64> = x.iter().map(|r| if r[0] < 0.5 { 1.0 + 4.0 * r[0] } else { cutoff }).collect();
    let c: Vec<bool> = x.iter().map(|r| r[0] >= 0.5).collect();
    let forest = fit_survival_forest(&x, &t, &c, &ForestConfig { n_trees: 25, min_leaf: 3, ..ForestConfig::default() }, 11)?;
    for q in [0.1, 0.4, 0.8] {
        let curve = forest.curve(&[q])?;
        println!(
            "x = {q}: S(5) = {:.2}, expected PAR10 {:.2}",
            curve.at(5.0),
            curve_risk(&curve, cutoff, RiskMode::ExpectedPar10)
        );
    }
    Ok(())
}
