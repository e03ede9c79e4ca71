//! Command-line driver: `run`, `gaps`, `synth`, `validate` and `wtl`.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on data errors. Messages go
//! to standard error; reports go to `--out` or standard output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;

use crate::aslib::{load_scenario_with, write_scenario, LoadOptions, Scenario};
use crate::eval::{emit_report, evaluate, wtl_markdown, wtl_table, EvalConfig, EvalReport, Protocol, ReportFormat, DEFAULT_TIE_EPS};
use crate::meta::{CostPolicy, MetaOptions};
use crate::ml::{derive_seed, ForestConfig};
use crate::selectors::{Family, Hyperparameters, SelectorSpec};
use crate::synth::{generate_scenario, SynthConfig};

pub const SEED_ENV: &str = "METASELECT_SEED";

#[derive(Debug, Parser)]
#[command(name = "metaselect", version, about = "Per-instance algorithm selection and selector selection")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cross-validated evaluation of base and meta selectors.
    Run(RunArgs),
    /// Oracle, AS-oracle, SBS and SBAS scores only.
    Gaps(RunArgs),
    /// Generate a synthetic scenario directory.
    Synth(SynthCmd),
    /// Load a scenario and list broken invariants.
    Validate(ValidateArgs),
    /// Win/tie/loss table of meta against base approaches over reports.
    Wtl(WtlArgs),
}

#[derive(Debug, clap::Args)]
struct SourceArgs {
    /// ASlib scenario directory.
    #[arg(long, conflicts_with = "synthetic")]
    scenario: Option<PathBuf>,
    /// Evaluate a generated scenario instead of a directory.
    #[arg(long)]
    synthetic: bool,
    #[command(flatten)]
    synth: SynthArgs,
    /// Refuse runs that reference unknown instances or pairs without runs.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated base selector families.
    #[arg(long, value_delimiter = ',')]
    base: Vec<Family>,
    /// Comma-separated meta selector families.
    #[arg(long, value_delimiter = ',')]
    meta: Vec<Family>,
    /// Line-oriented key=value file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Folds dropped from each end of the sorted fold scores.
    #[arg(long, default_value_t = 2)]
    crop: usize,
    /// Use the scenario's cv.arff folds when present.
    #[arg(long)]
    use_fold_hints: bool,
    #[arg(long, default_value_t = 5)]
    inner_folds: usize,
    /// Label meta instances with in-sample selector performance.
    #[arg(long)]
    in_sample: bool,
    /// Add one constant selector per algorithm to the pool.
    #[arg(long)]
    constants: bool,
    /// Charge feature computation time.
    #[arg(long)]
    feature_costs: bool,
    /// Charge feature time once when both levels use features.
    #[arg(long, requires = "feature_costs")]
    share_costs: bool,
    #[arg(long, default_value_t = 100)]
    n_trees: usize,
    #[arg(long, default_value_t = 16)]
    max_depth: usize,
    #[arg(long, default_value_t = 5)]
    min_leaf: usize,
    #[arg(long, default_value_t = 1.0)]
    ridge_lambda: f64,
    #[arg(long, default_value_t = 16)]
    sunny_k: usize,
    #[arg(long)]
    isac_k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json, csv or markdown; inferred from `--out` when omitted.
    #[arg(long)]
    format: Option<ReportFormat>,
}

#[derive(Debug, Clone, clap::Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 200)]
    n_instances: usize,
    #[arg(long, default_value_t = 4)]
    d_features: usize,
    #[arg(long, default_value_t = 3)]
    n_algorithms: usize,
    #[arg(long, default_value_t = 3)]
    regimes: usize,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, default_value_t = 0.0)]
    censor_rate: f64,
    #[arg(long, default_value_t = 100.0)]
    cutoff: f64,
    #[arg(long, default_value_t = 0.0)]
    feature_cost: f64,
}

#[derive(Debug, clap::Args)]
struct SynthCmd {
    #[command(flatten)]
    synth: SynthArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Target directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, clap::Args)]
struct ValidateArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, clap::Args)]
struct WtlArgs {
    /// JSON reports, one per scenario.
    #[arg(required = true)]
    reports: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TIE_EPS)]
    eps: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<ReportFormat>,
}

/// Runs the command line and returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a, false),
        Command::Gaps(a) => cmd_run(a, true),
        Command::Synth(a) => cmd_synth(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Wtl(a) => cmd_wtl(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<UsageError>() {
                Some(_) => 2,
                None => 1,
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

/// Splices `--config FILE` entries in front of the command-line flags so
/// that explicit flags override them.
fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.to_string_lossy().starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = match argv[pos].to_string_lossy().strip_prefix("--config=") {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(argv.get(pos + 1).ok_or_else(|| UsageError("--config needs a path".into()))?),
    };
    let sub = argv.get(1).map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let text = fs::read_to_string(&path).with_context(|| format!("reading config {}", path.display()))?;
    let cmd = Cli::command();
    let sub_cmd = cmd
        .find_subcommand(&sub)
        .ok_or_else(|| UsageError(format!("--config is not valid for '{sub}'")))?;
    let mut injected: Vec<OsString> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        let arg = sub_cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| UsageError(format!("{}:{}: unknown key '{key}'", path.display(), n + 1)))?;
        if key == "config" {
            continue;
        }
        if arg.get_action().takes_values() {
            injected.push(format!("--{key}").into());
            injected.push(value.into());
        } else {
            match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" | "on" => injected.push(format!("--{key}").into()),
                "false" | "no" | "0" | "off" => {}
                _ => return Err(UsageError(format!("{}:{}: '{key}' expects true or false", path.display(), n + 1)).into()),
            }
        }
    }
    let mut out: Vec<OsString> = argv[..2.min(argv.len())].to_vec();
    out.extend(injected);
    out.extend(argv.into_iter().skip(2));
    Ok(out)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("{SEED_ENV}='{v}' is not an unsigned integer")).into()),
        Err(_) => Ok(0),
    }
}

fn synth_config(a: &SynthArgs, seed: u64) -> SynthConfig {
    SynthConfig {
        n_instances: a.n_instances,
        d_features: a.d_features,
        n_algorithms: a.n_algorithms,
        regime_count: a.regimes,
        noise_std: a.noise,
        censor_rate: a.censor_rate,
        cutoff: a.cutoff,
        seed,
        feature_cost: a.feature_cost,
        ..SynthConfig::default()
    }
}

fn load_source(src: &SourceArgs, seed: u64) -> Result<Scenario> {
    match (&src.scenario, src.synthetic) {
        (Some(path), _) => load_scenario_with(path, LoadOptions { strict: src.strict })
            .with_context(|| format!("loading scenario {}", path.display())),
        (None, true) => {
            let cfg = synth_config(&src.synth, seed);
            cfg.validate().map_err(|e| UsageError(e.to_string()))?;
            Ok(generate_scenario(&cfg)?.0)
        }
        (None, false) => Err(UsageError("give --scenario DIR or --synthetic".into()).into()),
    }
}

fn output_format(format: Option<ReportFormat>, out: Option<&Path>) -> ReportFormat {
    format.unwrap_or_else(|| match out.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("csv") => ReportFormat::Csv,
        Some("md") | Some("markdown") => ReportFormat::Markdown,
        _ => ReportFormat::Json,
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn specs(families: &[Family], hyper: &Hyperparameters, seed: u64, offset: u64) -> Vec<SelectorSpec> {
    families
        .iter()
        .enumerate()
        .map(|(i, &f)| SelectorSpec::new(f).with_hyper(hyper.clone()).with_seed(derive_seed(seed, offset + i as u64)))
        .collect()
}

fn cmd_run(a: RunArgs, gaps_only: bool) -> Result<i32> {
    let seed = resolve_seed(a.seed)?;
    let base = if a.base.is_empty() && gaps_only { Family::ALL.to_vec() } else { a.base.clone() };
    let meta = if gaps_only { Vec::new() } else { a.meta.clone() };
    if base.is_empty() && !a.constants {
        return Err(UsageError(format!(
            "no selector pool: pass --base (one of {}) or --constants",
            Family::name_list()
        ))
        .into());
    }
    let hyper = Hyperparameters {
        ridge_lambda: a.ridge_lambda,
        forest: ForestConfig {
            n_trees: a.n_trees,
            max_depth: a.max_depth,
            min_leaf: a.min_leaf,
            ..ForestConfig::default()
        },
        sunny_k: a.sunny_k,
        isac_k: a.isac_k,
    };
    let base_specs = specs(&base, &hyper, seed, 0);
    let meta_specs = specs(&meta, &hyper, seed, 1_000);
    for s in base_specs.iter().chain(&meta_specs) {
        s.validate().map_err(|e| UsageError(e.to_string()))?;
    }
    let cfg = EvalConfig {
        protocol: Protocol {
            n_folds: a.folds,
            crop: a.crop,
            seed,
            use_fold_hints: a.use_fold_hints,
        },
        meta: MetaOptions {
            inner_folds: a.inner_folds,
            in_sample: a.in_sample,
            add_constants: a.constants,
            policy: CostPolicy {
                include_feature_costs: a.feature_costs,
                share_between_levels: a.share_costs,
            },
            strict: a.source.strict,
            seed,
        },
    };
    cfg.protocol.validate().map_err(|e| UsageError(e.to_string()))?;
    if a.inner_folds < 2 && !a.in_sample {
        return Err(UsageError("--inner-folds must be at least 2".into()).into());
    }
    let scenario = load_source(&a.source, seed)?;
    let report = evaluate(&scenario, &base_specs, &meta_specs, &cfg).context("evaluation failed")?;
    for ap in report.approaches.iter().filter(|x| !x.succeeded()) {
        eprintln!("warning: {} failed: {}", ap.name, ap.failure.as_deref().unwrap_or(""));
    }
    let format = output_format(a.format, a.out.as_deref());
    let text = if gaps_only { emit_gaps(&report, format) } else { emit_report(&report, format) };
    write_output(a.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct Gaps<'a> {
    scenario: &'a str,
    oracle: f64,
    as_oracle: f64,
    sbs: f64,
    sbas: f64,
    per_fold: BTreeMap<&'static str, &'a [f64]>,
}

fn emit_gaps(r: &EvalReport, format: ReportFormat) -> String {
    let b = &r.baselines;
    let rows = [
        ("oracle", &b.oracle),
        ("as_oracle", &b.as_oracle),
        ("sbs", &b.sbs),
        ("sbas", &b.sbas),
    ];
    match format {
        ReportFormat::Json => {
            let g = Gaps {
                scenario: &r.scenario,
                oracle: b.oracle.cropped_par10,
                as_oracle: b.as_oracle.cropped_par10,
                sbs: b.sbs.cropped_par10,
                sbas: b.sbas.cropped_par10,
                per_fold: rows.iter().map(|(k, s)| (*k, s.per_fold.as_slice())).collect(),
            };
            let mut s = serde_json::to_string_pretty(&g).expect("gaps serialize");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["scenario", "baseline", "metric", "value"]).unwrap();
            for (k, s) in rows {
                w.write_record([r.scenario.as_str(), k, "par10", &s.cropped_par10.to_string()]).unwrap();
                for (f, v) in s.per_fold.iter().enumerate() {
                    w.write_record([r.scenario.as_str(), k, &format!("fold{f}_par10"), &v.to_string()]).unwrap();
                }
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        ReportFormat::Markdown => {
            let mut s = format!("### {}\n\n| Baseline | PAR10 |\n|---|---:|\n", r.scenario);
            for (k, sc) in rows {
                s.push_str(&format!("| {k} | {:.2} |\n", sc.cropped_par10));
            }
            s
        }
    }
}

fn cmd_synth(a: SynthCmd) -> Result<i32> {
    let cfg = synth_config(&a.synth, resolve_seed(a.seed)?);
    cfg.validate().map_err(|e| UsageError(e.to_string()))?;
    let (s, _) = generate_scenario(&cfg)?;
    write_scenario(&s, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    eprintln!(
        "wrote {} ({} instances, {} algorithms) to {}",
        s.name,
        s.n_instances(),
        s.n_algorithms(),
        a.out.display()
    );
    Ok(0)
}

fn cmd_validate(a: ValidateArgs) -> Result<i32> {
    let s = load_scenario_with(&a.scenario, LoadOptions { strict: a.strict })
        .with_context(|| format!("loading scenario {}", a.scenario.display()))?;
    let violations = s.validate();
    for v in &violations {
        eprintln!("{}: {v}", a.scenario.display());
    }
    eprintln!(
        "{}: {} instances, {} algorithms, {} features, {} runs, {} violation(s)",
        s.name,
        s.n_instances(),
        s.n_algorithms(),
        s.n_features(),
        s.runs.len(),
        violations.len()
    );
    Ok(if violations.is_empty() { 0 } else { 1 })
}

fn cmd_wtl(a: WtlArgs) -> Result<i32> {
    if !(a.eps.is_finite() && a.eps >= 0.0) {
        bail!(UsageError("--eps must be a nonnegative number".into()));
    }
    let reports = a
        .reports
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str::<EvalReport>(&text).with_context(|| format!("parsing report {}", p.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    let cells = wtl_table(&reports, a.eps);
    // Markdown unless a format or a recognised `--out` extension says otherwise.
    let format = match (a.format, a.out.as_deref().and_then(|p| p.extension())) {
        (None, None) => ReportFormat::Markdown,
        (f, _) => output_format(f, a.out.as_deref()),
    };
    let text = match format {
        ReportFormat::Markdown => wtl_markdown(&cells),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&cells)?;
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["meta", "base", "wins", "ties", "losses"])?;
            for c in &cells {
                w.write_record([
                    c.meta.clone(),
                    c.base.clone(),
                    c.counts.wins.to_string(),
                    c.counts.ties.to_string(),
                    c.counts.losses.to_string(),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(0)
}
