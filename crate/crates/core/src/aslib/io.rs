use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use super::arff::{parse_arff, write_arff, Attribute, AttributeKind, RelationTable, Value};
use super::scenario::{validate_scenario, Run, RunRecord, RunStatus, Scenario};
use super::AslibError;

pub const DESCRIPTION_FILE: &str = "description.txt";
pub const RUNS_FILE: &str = "algorithm_runs.arff";
pub const FEATURES_FILE: &str = "feature_values.arff";
pub const COSTS_FILE: &str = "feature_costs.arff";
pub const CV_FILE: &str = "cv.arff";

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Turn recoverable data problems (runs for instances without a feature
    /// row) into hard errors.
    pub strict: bool,
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, AslibError> {
    load_scenario_with(path, LoadOptions::default())
}

pub fn load_scenario_with(path: impl AsRef<Path>, opts: LoadOptions) -> Result<Scenario, AslibError> {
    let dir = path.as_ref();
    let description_path = dir.join(DESCRIPTION_FILE);
    let description = read_required(&description_path)?;
    let keys = parse_description(&description);
    let cutoff = keys
        .get("algorithm_cutoff_time")
        .and_then(|v| v.parse::<f64>().ok())
        .filter(|c| c.is_finite() && *c > 0.0)
        .ok_or_else(|| AslibError::NoCutoff(description_path.clone()))?;
    let name = keys
        .get("scenario_id")
        .cloned()
        .filter(|s| !s.is_empty())
        .or_else(|| dir.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_default();

    let runs_path = dir.join(RUNS_FILE);
    let runs_table = read_table(&runs_path)?;
    let features_path = dir.join(FEATURES_FILE);
    let features_table = read_table(&features_path)?;

    // Features first: they define the instance order.
    let (feature_names, mut instance_ids, mut features) = read_features(&features_table, &features_path)?;
    let mut instance_pos: HashMap<String, usize> =
        instance_ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();

    let (algorithm_ids, runs) = read_runs(&runs_table, &runs_path, cutoff)?;
    for run in &runs {
        if !instance_pos.contains_key(&run.instance) {
            if opts.strict {
                return Err(AslibError::UnknownInstance {
                    instance: run.instance.clone(),
                    file: runs_path,
                });
            }
            warn!(
                "{}: instance `{}` has runs but no feature row; using all-missing features",
                runs_path.display(),
                run.instance
            );
            instance_pos.insert(run.instance.clone(), instance_ids.len());
            instance_ids.push(run.instance.clone());
            features.push(vec![None; feature_names.len()]);
        }
    }

    let costs_path = dir.join(COSTS_FILE);
    let feature_costs = if costs_path.exists() {
        read_costs(&read_table(&costs_path)?, &costs_path, &instance_pos)?
    } else {
        vec![0.0; instance_ids.len()]
    };
    let mut feature_costs = feature_costs;
    feature_costs.resize(instance_ids.len(), 0.0);

    let cv_path = dir.join(CV_FILE);
    let fold_hints = if cv_path.exists() {
        read_folds(&read_table(&cv_path)?, &cv_path, &instance_pos)?
    } else {
        None
    };

    Ok(Scenario {
        name,
        instance_ids,
        algorithm_ids,
        cutoff,
        runs,
        feature_names,
        features,
        feature_costs,
        fold_hints,
    })
}

fn read_required(path: &Path) -> Result<String, AslibError> {
    if !path.exists() {
        return Err(AslibError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|source| AslibError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_table(path: &Path) -> Result<RelationTable, AslibError> {
    let text = read_required(path)?;
    parse_arff(&text).map_err(|source| AslibError::Arff {
        file: path.to_path_buf(),
        source,
    })
}

/// Top-level `key: value` pairs; indented lines and list items are skipped.
pub fn parse_description(text: &str) -> HashMap<String, String> {
    text.lines()
        .filter(|l| !l.starts_with(char::is_whitespace) && !l.trim_start().starts_with(['-', '#']))
        .filter_map(|l| l.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().trim_matches(['\'', '"']).to_string()))
        .collect()
}

fn schema(file: &Path, message: impl Into<String>) -> AslibError {
    AslibError::Schema {
        file: file.to_path_buf(),
        message: message.into(),
    }
}

fn required_column(t: &RelationTable, name: &str, file: &Path) -> Result<usize, AslibError> {
    t.column(name)
        .ok_or_else(|| schema(file, format!("missing `{name}` attribute")))
}

fn text_cell(row: &[Value], col: usize, file: &Path, what: &str) -> Result<String, AslibError> {
    row[col]
        .as_text()
        .ok_or_else(|| schema(file, format!("missing {what}")))
}

fn repetition(row: &[Value], col: Option<usize>) -> u32 {
    col.and_then(|c| row[c].as_f64()).map(|r| r.max(0.0) as u32).unwrap_or(1)
}

fn read_features(
    t: &RelationTable,
    file: &Path,
) -> Result<(Vec<String>, Vec<String>, Vec<Vec<Option<f64>>>), AslibError> {
    let id_col = required_column(t, "instance_id", file)?;
    let rep_col = t.column("repetition");
    let feature_cols: Vec<usize> = (0..t.attributes.len())
        .filter(|&c| c != id_col && Some(c) != rep_col)
        .collect();
    if feature_cols.is_empty() {
        return Err(schema(file, "no feature attributes"));
    }
    for &c in &feature_cols {
        if t.attributes[c].kind != AttributeKind::Numeric {
            return Err(schema(file, format!("feature `{}` is not numeric", t.attributes[c].name)));
        }
    }
    let names = feature_cols.iter().map(|&c| t.attributes[c].name.clone()).collect();

    // Repeated rows of one instance are averaged per feature over non-missing values.
    let mut ids: Vec<String> = Vec::new();
    let mut pos: HashMap<String, usize> = HashMap::new();
    let mut sums: Vec<Vec<(f64, usize)>> = Vec::new();
    for row in &t.rows {
        let id = text_cell(row, id_col, file, "instance_id")?;
        let i = *pos.entry(id.clone()).or_insert_with(|| {
            ids.push(id);
            sums.push(vec![(0.0, 0); feature_cols.len()]);
            ids.len() - 1
        });
        for (slot, &c) in sums[i].iter_mut().zip(&feature_cols) {
            if let Some(v) = row[c].as_f64() {
                slot.0 += v;
                slot.1 += 1;
            }
        }
    }
    let features = sums
        .into_iter()
        .map(|fv| {
            fv.into_iter()
                .map(|(s, n)| (n > 0).then(|| if n == 1 { s } else { s / n as f64 }))
                .collect()
        })
        .collect();
    Ok((names, ids, features))
}

fn read_runs(t: &RelationTable, file: &Path, cutoff: f64) -> Result<(Vec<String>, Vec<Run>), AslibError> {
    let id_col = required_column(t, "instance_id", file)?;
    let alg_col = required_column(t, "algorithm", file)?;
    let status_col = required_column(t, "runstatus", file)?;
    let rep_col = t.column("repetition");
    let runtime_col = match t.column("runtime") {
        Some(c) => c,
        None => (0..t.attributes.len())
            .find(|&c| {
                c > alg_col
                    && Some(c) != rep_col
                    && c != status_col
                    && t.attributes[c].kind == AttributeKind::Numeric
            })
            .ok_or_else(|| schema(file, "no numeric performance attribute"))?,
    };

    let mut algorithms: Vec<String> = Vec::new();
    let mut runs = Vec::with_capacity(t.rows.len());
    for row in &t.rows {
        let instance = text_cell(row, id_col, file, "instance_id")?;
        let algorithm = text_cell(row, alg_col, file, "algorithm")?;
        let mut status = match &row[status_col] {
            Value::Missing => RunStatus::Other,
            v => v.as_text().unwrap_or_default().parse().unwrap_or(RunStatus::Other),
        };
        let runtime = match row[runtime_col].as_f64() {
            Some(rt) => rt,
            None => {
                if status.is_ok() {
                    warn!("{}: ok run ({instance}, {algorithm}) without runtime", file.display());
                    status = RunStatus::Other;
                }
                cutoff
            }
        };
        if status.is_ok() && runtime > cutoff {
            warn!(
                "{}: ok run ({instance}, {algorithm}) exceeds cutoff ({runtime} > {cutoff}); counted as timeout",
                file.display()
            );
            status = RunStatus::Timeout;
        }
        if !algorithms.contains(&algorithm) {
            algorithms.push(algorithm.clone());
        }
        runs.push(Run {
            instance,
            algorithm,
            repetition: repetition(row, rep_col),
            record: RunRecord::new(runtime, status),
        });
    }

    // Nominal algorithm columns keep their declared order.
    if let AttributeKind::Categorical(levels) = &t.attributes[alg_col].kind {
        algorithms = levels.iter().filter(|l| algorithms.contains(l)).cloned().collect();
    }
    Ok((algorithms, runs))
}

fn read_costs(t: &RelationTable, file: &Path, instance_pos: &HashMap<String, usize>) -> Result<Vec<f64>, AslibError> {
    let id_col = required_column(t, "instance_id", file)?;
    let rep_col = t.column("repetition");
    let cost_cols: Vec<usize> = (0..t.attributes.len())
        .filter(|&c| c != id_col && Some(c) != rep_col && t.attributes[c].kind == AttributeKind::Numeric)
        .collect();
    let mut totals = vec![(0.0, 0usize); instance_pos.len()];
    for row in &t.rows {
        let id = text_cell(row, id_col, file, "instance_id")?;
        let Some(&i) = instance_pos.get(&id) else {
            warn!("{}: cost row for unknown instance `{id}` ignored", file.display());
            continue;
        };
        let sum: f64 = cost_cols.iter().filter_map(|&c| row[c].as_f64()).sum();
        totals[i].0 += sum;
        totals[i].1 += 1;
    }
    Ok(totals
        .into_iter()
        .map(|(s, n)| if n <= 1 { s } else { s / n as f64 })
        .collect())
}

fn read_folds(
    t: &RelationTable,
    file: &Path,
    instance_pos: &HashMap<String, usize>,
) -> Result<Option<Vec<usize>>, AslibError> {
    let id_col = required_column(t, "instance_id", file)?;
    let fold_col = required_column(t, "fold", file)?;
    let mut folds: Vec<Option<usize>> = vec![None; instance_pos.len()];
    for row in &t.rows {
        let id = text_cell(row, id_col, file, "instance_id")?;
        let Some(&i) = instance_pos.get(&id) else {
            warn!("{}: fold row for unknown instance `{id}` ignored", file.display());
            continue;
        };
        let fold = row[fold_col]
            .as_f64()
            .filter(|f| *f >= 1.0)
            .ok_or_else(|| schema(file, format!("invalid fold for `{id}`")))?;
        folds[i].get_or_insert(fold as usize - 1);
    }
    if folds.iter().any(Option::is_none) {
        warn!("{}: not every instance has a fold; fold hints ignored", file.display());
        return Ok(None);
    }
    Ok(Some(folds.into_iter().flatten().collect()))
}

/// Writes the file set read by [`load_scenario`]. `feature_costs.arff` is only
/// emitted when some cost is nonzero, `cv.arff` only when fold hints exist.
pub fn write_scenario(s: &Scenario, path: impl AsRef<Path>) -> Result<(), AslibError> {
    let violations = validate_scenario(s);
    if !violations.is_empty() {
        return Err(AslibError::Invalid(violations));
    }
    let dir = path.as_ref();
    fs::create_dir_all(dir).map_err(|source| AslibError::Io {
        path: dir.to_path_buf(),
        source,
    })?;

    let description = format!(
        "scenario_id: {}\nperformance_measures: runtime\nmaximize: false\nperformance_type: runtime\nalgorithm_cutoff_time: {}\n",
        s.name,
        super::arff::format_number(s.cutoff)
    );
    write_file(&dir.join(DESCRIPTION_FILE), &description)?;

    let mut runs = RelationTable::new(
        format!("ALGORITHM_RUNS_{}", s.name),
        vec![
            Attribute::new("instance_id", AttributeKind::Text),
            Attribute::new("repetition", AttributeKind::Numeric),
            Attribute::new("algorithm", AttributeKind::Categorical(s.algorithm_ids.clone())),
            Attribute::new("runtime", AttributeKind::Numeric),
            Attribute::new(
                "runstatus",
                AttributeKind::Categorical(RunStatus::ALL.iter().map(|st| st.as_str().to_string()).collect()),
            ),
        ],
    );
    runs.rows = s
        .runs
        .iter()
        .map(|r| {
            vec![
                Value::Text(r.instance.clone()),
                Value::Number(r.repetition as f64),
                Value::Category(r.algorithm.clone()),
                Value::Number(r.record.runtime),
                Value::Category(r.record.status.as_str().to_string()),
            ]
        })
        .collect();
    write_file(&dir.join(RUNS_FILE), &write_arff(&runs))?;

    let mut attrs = vec![
        Attribute::new("instance_id", AttributeKind::Text),
        Attribute::new("repetition", AttributeKind::Numeric),
    ];
    attrs.extend(s.feature_names.iter().map(|n| Attribute::new(n.clone(), AttributeKind::Numeric)));
    let mut features = RelationTable::new(format!("FEATURES_{}", s.name), attrs);
    features.rows = s
        .instance_ids
        .iter()
        .zip(&s.features)
        .map(|(id, fv)| {
            let mut row = vec![Value::Text(id.clone()), Value::Number(1.0)];
            row.extend(fv.iter().map(|v| v.map_or(Value::Missing, Value::Number)));
            row
        })
        .collect();
    write_file(&dir.join(FEATURES_FILE), &write_arff(&features))?;

    let costs_path = dir.join(COSTS_FILE);
    if s.feature_costs.iter().any(|c| *c > 0.0) {
        let mut costs = RelationTable::new(
            format!("FEATURE_COSTS_{}", s.name),
            vec![
                Attribute::new("instance_id", AttributeKind::Text),
                Attribute::new("repetition", AttributeKind::Numeric),
                Attribute::new("total_cost", AttributeKind::Numeric),
            ],
        );
        costs.rows = s
            .instance_ids
            .iter()
            .zip(&s.feature_costs)
            .map(|(id, c)| vec![Value::Text(id.clone()), Value::Number(1.0), Value::Number(*c)])
            .collect();
        write_file(&costs_path, &write_arff(&costs))?;
    } else {
        remove_stale(&costs_path)?;
    }

    let cv_path = dir.join(CV_FILE);
    if let Some(hints) = &s.fold_hints {
        let mut cv = RelationTable::new(
            format!("CV_{}", s.name),
            vec![
                Attribute::new("instance_id", AttributeKind::Text),
                Attribute::new("repetition", AttributeKind::Numeric),
                Attribute::new("fold", AttributeKind::Numeric),
            ],
        );
        cv.rows = s
            .instance_ids
            .iter()
            .zip(hints)
            .map(|(id, f)| vec![Value::Text(id.clone()), Value::Number(1.0), Value::Number((*f + 1) as f64)])
            .collect();
        write_file(&cv_path, &write_arff(&cv))?;
    } else {
        remove_stale(&cv_path)?;
    }
    Ok(())
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), AslibError> {
    fs::write(path, contents).map_err(|source| AslibError::Io {
        path: path.clone(),
        source,
    })
}

fn remove_stale(path: &Path) -> Result<(), AslibError> {
    if path.exists() {
        fs::remove_file(path).map_err(|source| AslibError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aslib::scenario::tests::two_by_two;

    fn write_dir(files: &[(&str, &str)]) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (name, body) in files {
            fs::write(dir.path().join(name), body).unwrap();
        }
        dir
    }

    const RUNS: &str = "@RELATION runs\n@ATTRIBUTE instance_id STRING\n@ATTRIBUTE repetition NUMERIC\n\
        @ATTRIBUTE algorithm STRING\n@ATTRIBUTE runtime NUMERIC\n@ATTRIBUTE runstatus {ok,timeout,memout,crash,other}\n@DATA\n\
        i1,1,A,1,ok\ni1,1,B,100,timeout\ni2,1,A,?,timeout\ni2,1,B,3,ok\n";
    const FEATS: &str = "@RELATION f\n@ATTRIBUTE instance_id STRING\n@ATTRIBUTE repetition NUMERIC\n\
        @ATTRIBUTE x NUMERIC\n@DATA\ni1,1,0.5\ni2,1,?\n";

    #[test]
    fn direct_join() {
        let dir = write_dir(&[
            (DESCRIPTION_FILE, "scenario_id: toy\nalgorithm_cutoff_time: 100\n"),
            (RUNS_FILE, RUNS),
            (FEATURES_FILE, FEATS),
        ]);
        let s = load_scenario(dir.path()).unwrap();
        assert_eq!(s.cutoff, 100.0);
        assert_eq!(s.runs.len(), 4);
        assert_eq!(s.instance_ids, vec!["i1", "i2"]);
        assert_eq!(s.algorithm_ids, vec!["A", "B"]);
        assert_eq!(s.features, vec![vec![Some(0.5)], vec![None]]);
        assert_eq!(s.feature_costs, vec![0.0, 0.0]);
        // missing runtime on an unsolved run is read as the cutoff
        assert_eq!(s.runs[2].record, RunRecord::new(100.0, RunStatus::Timeout));
        assert!(s.validate().is_empty());
    }

    #[test]
    fn no_cutoff() {
        let dir = write_dir(&[
            (DESCRIPTION_FILE, "scenario_id: toy\nalgorithm_cutoff_memory: ?\n"),
            (RUNS_FILE, RUNS),
            (FEATURES_FILE, FEATS),
        ]);
        assert!(matches!(load_scenario(dir.path()), Err(AslibError::NoCutoff(_))));
    }

    #[test]
    fn missing_required_file() {
        let dir = write_dir(&[(DESCRIPTION_FILE, "algorithm_cutoff_time: 10\n"), (RUNS_FILE, RUNS)]);
        match load_scenario(dir.path()) {
            Err(AslibError::MissingFile(p)) => assert!(p.ends_with(FEATURES_FILE)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_instance_lenient_and_strict() {
        let feats = "@RELATION f\n@ATTRIBUTE instance_id STRING\n@ATTRIBUTE repetition NUMERIC\n\
            @ATTRIBUTE x NUMERIC\n@ATTRIBUTE y NUMERIC\n@DATA\ni1,1,0.5,1\n";
        let dir = write_dir(&[
            (DESCRIPTION_FILE, "algorithm_cutoff_time: 100\n"),
            (RUNS_FILE, RUNS),
            (FEATURES_FILE, feats),
        ]);
        let s = load_scenario(dir.path()).unwrap();
        assert_eq!(s.features[1], vec![None, None]);
        let err = load_scenario_with(dir.path(), LoadOptions { strict: true }).unwrap_err();
        assert!(matches!(err, AslibError::UnknownInstance { ref instance, .. } if instance == "i2"));
    }

    #[test]
    fn costs_summed_and_folds_read() {
        let costs = "@RELATION c\n@ATTRIBUTE instance_id STRING\n@ATTRIBUTE repetition NUMERIC\n\
            @ATTRIBUTE g1 NUMERIC\n@ATTRIBUTE g2 NUMERIC\n@DATA\ni1,1,1.5,2\ni2,1,?,4\n";
        let cv = "@RELATION cv\n@ATTRIBUTE instance_id STRING\n@ATTRIBUTE repetition NUMERIC\n\
            @ATTRIBUTE fold NUMERIC\n@DATA\ni1,1,2\ni2,1,1\n";
        let dir = write_dir(&[
            (DESCRIPTION_FILE, "scenario_id: toy\nperformance_measures:\n  - runtime\nalgorithm_cutoff_time: 100\n"),
            (RUNS_FILE, RUNS),
            (FEATURES_FILE, FEATS),
            (COSTS_FILE, costs),
            (CV_FILE, cv),
        ]);
        let s = load_scenario(dir.path()).unwrap();
        assert_eq!(s.feature_costs, vec![3.5, 4.0]);
        assert_eq!(s.fold_hints, Some(vec![1, 0]));
    }

    #[test]
    fn ok_beyond_cutoff_is_coerced() {
        let runs = RUNS.replace("i2,1,B,3,ok", "i2,1,B,150,ok");
        let dir = write_dir(&[
            (DESCRIPTION_FILE, "algorithm_cutoff_time: 100\n"),
            (RUNS_FILE, &runs),
            (FEATURES_FILE, FEATS),
        ]);
        let s = load_scenario(dir.path()).unwrap();
        assert_eq!(s.runs[3].record.status, RunStatus::Timeout);
    }

    #[test]
    fn round_trip_and_missing_token() {
        let mut s = two_by_two();
        s.features[1][0] = None;
        s.feature_costs = vec![0.25, 0.0];
        s.fold_hints = Some(vec![0, 1]);
        let dir = tempfile::tempdir().unwrap();
        write_scenario(&s, dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join(FEATURES_FILE)).unwrap();
        assert!(text.lines().any(|l| l.ends_with(",?")));
        assert_eq!(load_scenario(dir.path()).unwrap(), s);
    }

    #[test]
    fn zero_costs_skip_file() {
        let s = two_by_two();
        let dir = tempfile::tempdir().unwrap();
        write_scenario(&s, dir.path()).unwrap();
        assert!(!dir.path().join(COSTS_FILE).exists());
        assert_eq!(load_scenario(dir.path()).unwrap().feature_costs, vec![0.0, 0.0]);
    }

    #[test]
    fn unwritable_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let err = write_scenario(&two_by_two(), blocker.join("sub")).unwrap_err();
        assert!(matches!(err, AslibError::Io { .. }));
    }

    #[test]
    fn invalid_scenario_not_written() {
        let mut s = two_by_two();
        s.cutoff = 0.0;
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(write_scenario(&s, dir.path()), Err(AslibError::Invalid(_))));
    }
}
