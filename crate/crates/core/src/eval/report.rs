use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Protocol;
use crate::meta::MetaOptions;
use crate::selectors::SelectorSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Base,
    Meta,
}

/// A normalized score, or the marker that the normalizing gap is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalized {
    Value(f64),
    Degenerate,
}

impl Normalized {
    pub fn value(self) -> Option<f64> {
        match self {
            Normalized::Value(v) => Some(v),
            Normalized::Degenerate => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineScore {
    pub per_fold: Vec<f64>,
    pub cropped_par10: f64,
    /// Normalized against the base oracle and single best solver.
    pub npar10: Normalized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    pub oracle: BaselineScore,
    pub sbs: BaselineScore,
    pub as_oracle: BaselineScore,
    pub sbas: BaselineScore,
    /// Training-set choice of the single best solver per fold.
    pub sbs_choices: Vec<String>,
    /// Training-set choice of the single best selector per fold.
    pub sbas_choices: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Brackets {
    /// Base approaches with a cropped PAR10 no better than this approach.
    pub at_least_as_good: usize,
    pub worse: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachReport {
    pub name: String,
    pub level: Level,
    /// Set when the approach failed on some fold; scores are then absent.
    pub failure: Option<String>,
    pub per_fold_par10: Vec<f64>,
    pub cropped_par10: Option<f64>,
    pub npar10: Option<Normalized>,
    /// Meta approaches only: normalized against the AS-oracle and SBAS.
    pub npar10_meta: Option<Normalized>,
    pub brackets: Option<Brackets>,
}

impl ApproachReport {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSummary {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub protocol: Protocol,
    pub meta_options: MetaOptions,
    pub base_specs: Vec<SelectorSpec>,
    pub meta_specs: Vec<SelectorSpec>,
    pub normalization: String,
    pub folds: Vec<FoldSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub scenario: String,
    pub baselines: Baselines,
    pub approaches: Vec<ApproachReport>,
    /// Test-fold PAR10 of every pool member, constants included.
    pub pool: Vec<ApproachReport>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown format '{other}' (json, csv, markdown)")),
        }
    }
}

pub fn emit_report(r: &EvalReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => emit_csv(r),
        ReportFormat::Markdown => emit_markdown(r),
    }
}

fn fmt_norm(n: Option<Normalized>) -> String {
    match n {
        Some(Normalized::Value(v)) => format!("{v}"),
        Some(Normalized::Degenerate) => "degenerate".into(),
        None => String::new(),
    }
}

fn emit_csv(r: &EvalReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["scenario", "approach", "metric", "value"]).unwrap();
    let mut row = |approach: &str, metric: &str, value: String| {
        w.write_record([r.scenario.as_str(), approach, metric, value.as_str()]).unwrap();
    };
    let b = &r.baselines;
    for (name, score) in [("oracle", &b.oracle), ("sbs", &b.sbs), ("as_oracle", &b.as_oracle), ("sbas", &b.sbas)] {
        row(name, "par10", score.cropped_par10.to_string());
        row(name, "npar10", fmt_norm(Some(score.npar10)));
        for (k, v) in score.per_fold.iter().enumerate() {
            row(name, &format!("fold{k}_par10"), v.to_string());
        }
    }
    for a in r.approaches.iter().chain(&r.pool) {
        let name = match a.level {
            Level::Meta => format!("meta:{}", a.name),
            Level::Base => a.name.clone(),
        };
        if let Some(msg) = &a.failure {
            row(&name, "failure", msg.clone());
            continue;
        }
        if let Some(v) = a.cropped_par10 {
            row(&name, "par10", v.to_string());
        }
        if a.npar10.is_some() {
            row(&name, "npar10", fmt_norm(a.npar10));
        }
        if a.npar10_meta.is_some() {
            row(&name, "npar10_meta", fmt_norm(a.npar10_meta));
        }
        if let Some(br) = a.brackets {
            row(&name, "brackets_a", br.at_least_as_good.to_string());
            row(&name, "brackets_b", br.worse.to_string());
        }
        for (k, v) in a.per_fold_par10.iter().enumerate() {
            row(&name, &format!("fold{k}_par10"), v.to_string());
        }
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn emit_markdown(r: &EvalReport) -> String {
    let mut out = String::new();
    writeln!(out, "### {}\n", r.scenario).unwrap();
    out.push_str("| Approach | Level | PAR10 | nPAR10 | nPAR10 (SBAS/AS-oracle) | (a/b) |\n");
    out.push_str("|---|---|---:|---:|---:|---:|\n");
    let best = r
        .approaches
        .iter()
        .filter_map(|a| a.npar10.and_then(Normalized::value).or(a.cropped_par10))
        .fold(f64::INFINITY, f64::min);
    for a in &r.approaches {
        let level = match a.level {
            Level::Base => "base",
            Level::Meta => "meta",
        };
        if let Some(msg) = &a.failure {
            writeln!(out, "| {} | {level} | failed: {} | | | |", a.name, msg.replace('|', "/")).unwrap();
            continue;
        }
        let key = a.npar10.and_then(Normalized::value).or(a.cropped_par10);
        let bold = |s: String| if key == Some(best) { format!("**{s}**") } else { s };
        let par10 = a.cropped_par10.map(|v| format!("{v:.2}")).unwrap_or_default();
        let n = match a.npar10 {
            Some(Normalized::Value(v)) => format!("{v:.4}"),
            other => fmt_norm(other),
        };
        let nm = match a.npar10_meta {
            Some(Normalized::Value(v)) => format!("{v:.4}"),
            other => fmt_norm(other),
        };
        let br = a
            .brackets
            .map(|b| format!("({}/{})", b.at_least_as_good, b.worse))
            .unwrap_or_default();
        if a.npar10.and_then(Normalized::value).is_some() {
            writeln!(out, "| {} | {level} | {par10} | {} | {nm} | {br} |", a.name, bold(n)).unwrap();
        } else {
            writeln!(out, "| {} | {level} | {} | {n} | {nm} | {br} |", a.name, bold(par10)).unwrap();
        }
    }
    let b = &r.baselines;
    for (name, s) in [("Oracle", &b.oracle), ("SBS", &b.sbs), ("AS-oracle", &b.as_oracle), ("SBAS", &b.sbas)] {
        let n = match s.npar10 {
            Normalized::Value(v) => format!("{v:.4}"),
            Normalized::Degenerate => "degenerate".into(),
        };
        writeln!(out, "| {name} | baseline | {:.2} | {n} | | |", s.cropped_par10).unwrap();
    }
    out
}
