use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Outcome of a single algorithm run. Everything except `Ok` is scored as unsolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Timeout,
    Memout,
    Crash,
    Other,
}

impl RunStatus {
    pub const ALL: [RunStatus; 5] = [
        RunStatus::Ok,
        RunStatus::Timeout,
        RunStatus::Memout,
        RunStatus::Crash,
        RunStatus::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::Timeout => "timeout",
            RunStatus::Memout => "memout",
            RunStatus::Crash => "crash",
            RunStatus::Other => "other",
        }
    }

    pub fn is_ok(self) -> bool {
        self == RunStatus::Ok
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RunStatus {
    type Err = std::convert::Infallible;

    /// Unrecognised ASlib statuses (`unknown`, `not_applicable`, ...) map to `Other`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "ok" => RunStatus::Ok,
            "timeout" => RunStatus::Timeout,
            "memout" => RunStatus::Memout,
            "crash" => RunStatus::Crash,
            _ => RunStatus::Other,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub runtime: f64,
    pub status: RunStatus,
}

impl RunRecord {
    pub fn new(runtime: f64, status: RunStatus) -> Self {
        Self { runtime, status }
    }
}

/// One row of `algorithm_runs.arff`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Run {
    pub instance: String,
    pub algorithm: String,
    pub repetition: u32,
    pub record: RunRecord,
}

/// In-memory model of an ASlib scenario.
///
/// `features[i]` and `feature_costs[i]` belong to `instance_ids[i]`; `None`
/// marks a missing feature value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub instance_ids: Vec<String>,
    pub algorithm_ids: Vec<String>,
    pub cutoff: f64,
    pub runs: Vec<Run>,
    pub feature_names: Vec<String>,
    pub features: Vec<Vec<Option<f64>>>,
    pub feature_costs: Vec<f64>,
    /// Zero-based fold index per instance, taken from `cv.arff`.
    pub fold_hints: Option<Vec<usize>>,
}

impl Scenario {
    pub fn n_instances(&self) -> usize {
        self.instance_ids.len()
    }

    pub fn n_algorithms(&self) -> usize {
        self.algorithm_ids.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn instance_index(&self) -> HashMap<&str, usize> {
        self.instance_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect()
    }

    pub fn algorithm_index(&self) -> HashMap<&str, usize> {
        self.algorithm_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect()
    }

    /// Runs grouped as `[instance][algorithm] -> records`, in file order.
    /// Runs that reference unknown ids are skipped.
    pub fn run_table(&self) -> Vec<Vec<Vec<RunRecord>>> {
        let inst = self.instance_index();
        let alg = self.algorithm_index();
        let mut table = vec![vec![Vec::new(); self.n_algorithms()]; self.n_instances()];
        for run in &self.runs {
            if let (Some(&i), Some(&a)) = (inst.get(run.instance.as_str()), alg.get(run.algorithm.as_str())) {
                table[i][a].push(run.record);
            }
        }
        table
    }

    /// Lists every broken invariant. An empty list means the scenario is valid.
    pub fn validate(&self) -> Vec<String> {
        validate_scenario(self)
    }
}

pub fn validate_scenario(s: &Scenario) -> Vec<String> {
    let mut violations = Vec::new();

    if !(s.cutoff.is_finite() && s.cutoff > 0.0) {
        violations.push(format!("scenario `{}`: cutoff {} must be positive and finite", s.name, s.cutoff));
    }
    if s.instance_ids.is_empty() {
        violations.push(format!("scenario `{}`: no instances", s.name));
    }
    if s.algorithm_ids.is_empty() {
        violations.push(format!("scenario `{}`: no algorithms", s.name));
    }
    for (kind, ids) in [("instance", &s.instance_ids), ("algorithm", &s.algorithm_ids)] {
        let mut seen = HashSet::new();
        for id in ids {
            if !seen.insert(id) {
                violations.push(format!("{kind} `{id}`: duplicate id"));
            }
        }
    }

    let d = s.feature_names.len();
    if d == 0 {
        violations.push(format!("scenario `{}`: feature dimension must be at least 1", s.name));
    }
    if s.features.len() != s.instance_ids.len() {
        violations.push(format!(
            "scenario `{}`: {} feature vectors for {} instances",
            s.name,
            s.features.len(),
            s.instance_ids.len()
        ));
    }
    for (id, fv) in s.instance_ids.iter().zip(&s.features) {
        if fv.len() != d {
            violations.push(format!("instance `{id}`: feature vector has dimension {}, expected {d}", fv.len()));
        }
        if fv.iter().flatten().any(|v| !v.is_finite()) {
            violations.push(format!("instance `{id}`: non-finite feature value"));
        }
    }
    if s.feature_costs.len() != s.instance_ids.len() {
        violations.push(format!(
            "scenario `{}`: {} feature costs for {} instances",
            s.name,
            s.feature_costs.len(),
            s.instance_ids.len()
        ));
    }
    for (id, c) in s.instance_ids.iter().zip(&s.feature_costs) {
        if !(c.is_finite() && *c >= 0.0) {
            violations.push(format!("instance `{id}`: feature cost {c} must be finite and nonnegative"));
        }
    }
    if let Some(hints) = &s.fold_hints {
        if hints.len() != s.instance_ids.len() {
            violations.push(format!(
                "scenario `{}`: {} fold hints for {} instances",
                s.name,
                hints.len(),
                s.instance_ids.len()
            ));
        }
    }

    let inst = s.instance_index();
    let alg = s.algorithm_index();
    let mut covered = HashSet::new();
    for run in &s.runs {
        let label = format!("run ({}, {}, rep {})", run.instance, run.algorithm, run.repetition);
        let i = inst.get(run.instance.as_str());
        let a = alg.get(run.algorithm.as_str());
        if i.is_none() {
            violations.push(format!("{label}: unknown instance `{}`", run.instance));
        }
        if a.is_none() {
            violations.push(format!("{label}: unknown algorithm `{}`", run.algorithm));
        }
        let rt = run.record.runtime;
        if !(rt.is_finite() && rt >= 0.0) {
            violations.push(format!("{label}: runtime {rt} must be finite and nonnegative"));
        }
        if run.record.status.is_ok() && rt > s.cutoff {
            violations.push(format!("{label}: status ok but runtime {rt} exceeds cutoff {}", s.cutoff));
        }
        if let (Some(&i), Some(&a)) = (i, a) {
            covered.insert((i, a));
        }
    }
    for (i, iid) in s.instance_ids.iter().enumerate() {
        for (a, aid) in s.algorithm_ids.iter().enumerate() {
            if !covered.contains(&(i, a)) {
                violations.push(format!("pair ({iid}, {aid}): no run record"));
            }
        }
    }

    violations
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn two_by_two() -> Scenario {
        let mut runs = Vec::new();
        for (inst, alg, rt, st) in [
            ("i1", "A", 1.0, RunStatus::Ok),
            ("i1", "B", 100.0, RunStatus::Timeout),
            ("i2", "A", 100.0, RunStatus::Timeout),
            ("i2", "B", 1.0, RunStatus::Ok),
        ] {
            runs.push(Run {
                instance: inst.into(),
                algorithm: alg.into(),
                repetition: 1,
                record: RunRecord::new(rt, st),
            });
        }
        Scenario {
            name: "toy".into(),
            instance_ids: vec!["i1".into(), "i2".into()],
            algorithm_ids: vec!["A".into(), "B".into()],
            cutoff: 100.0,
            runs,
            feature_names: vec!["f1".into()],
            features: vec![vec![Some(0.0)], vec![Some(1.0)]],
            feature_costs: vec![0.0, 0.0],
            fold_hints: None,
        }
    }

    #[test]
    fn well_formed_has_no_violations() {
        assert!(validate_scenario(&two_by_two()).is_empty());
    }

    #[test]
    fn ok_run_beyond_cutoff() {
        let mut s = two_by_two();
        s.runs[0].record = RunRecord::new(101.0, RunStatus::Ok);
        let v = validate_scenario(&s);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("run (i1, A"));
    }

    #[test]
    fn wrong_feature_dimension() {
        let mut s = two_by_two();
        s.features[1] = vec![Some(1.0), Some(2.0)];
        let v = validate_scenario(&s);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("instance `i2`"));
    }

    #[test]
    fn missing_pair_and_unknown_ids() {
        let mut s = two_by_two();
        s.runs[3].algorithm = "C".into();
        let v = validate_scenario(&s);
        assert!(v.iter().any(|m| m.contains("unknown algorithm `C`")));
        assert!(v.iter().any(|m| m.contains("pair (i2, B)")));
    }

    #[test]
    fn status_parsing() {
        assert_eq!("OK".parse::<RunStatus>().unwrap(), RunStatus::Ok);
        assert_eq!("not_applicable".parse::<RunStatus>().unwrap(), RunStatus::Other);
        assert_eq!("memout".parse::<RunStatus>().unwrap(), RunStatus::Memout);
    }
}
