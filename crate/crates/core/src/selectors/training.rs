use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::SelectorError;
use crate::aslib::Scenario;
use crate::eval::par10;

/// Smallest survival time handed to the survival forests.
const MIN_TIME: f64 = 1e-6;

/// One observed run of a choice on a training row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub par10: f64,
    /// Observed time in `(0, cutoff]`; equals the cutoff when censored.
    pub time: f64,
    pub censored: bool,
}

impl Outcome {
    pub fn from_par10(par10: f64, cutoff: f64) -> Self {
        let censored = par10 >= 10.0 * cutoff;
        Self {
            par10,
            time: if censored { cutoff } else { par10.clamp(MIN_TIME, cutoff) },
            censored,
        }
    }
}

/// Training data for a selector over any candidate set: algorithms at the
/// base level, selectors at the meta level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSet {
    pub choice_ids: Vec<String>,
    pub cutoff: f64,
    pub features: Vec<Vec<Option<f64>>>,
    /// `outcomes[row][choice]`, one entry per repetition.
    pub outcomes: Vec<Vec<Vec<Outcome>>>,
}

impl TrainingSet {
    /// Rows are the given instance ids of `s`, in the given order.
    pub fn from_scenario(s: &Scenario, subset: &[String]) -> Result<Self, SelectorError> {
        let index = s.instance_index();
        let table = s.run_table();
        let mut features = Vec::with_capacity(subset.len());
        let mut outcomes = Vec::with_capacity(subset.len());
        for id in subset {
            let &i = index
                .get(id.as_str())
                .ok_or_else(|| SelectorError::DegenerateInput(format!("unknown instance '{id}'")))?;
            features.push(s.features[i].clone());
            outcomes.push(
                table[i]
                    .iter()
                    .map(|reps| {
                        reps.iter()
                            .map(|r| Outcome::from_par10(par10(r.runtime, r.status, s.cutoff), s.cutoff))
                            .collect()
                    })
                    .collect(),
            );
        }
        Ok(Self {
            choice_ids: s.algorithm_ids.clone(),
            cutoff: s.cutoff,
            features,
            outcomes,
        })
    }

    /// One outcome per (row, choice) taken from a dense value matrix. Values
    /// at or above `10 * cutoff` count as censored.
    pub fn from_matrix(
        choice_ids: Vec<String>,
        features: Vec<Vec<Option<f64>>>,
        values: &[Vec<f64>],
        cutoff: f64,
    ) -> Result<Self, SelectorError> {
        if values.len() != features.len() || values.iter().any(|r| r.len() != choice_ids.len()) {
            return Err(SelectorError::DegenerateInput("value matrix does not match rows and choices".into()));
        }
        let outcomes = values
            .iter()
            .map(|row| row.iter().map(|&v| vec![Outcome::from_par10(v, cutoff)]).collect())
            .collect();
        Ok(Self {
            choice_ids,
            cutoff,
            features,
            outcomes,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.features.len()
    }

    /// Mean PAR10 over repetitions; `10 * cutoff` when nothing was observed.
    pub fn mean_par10(&self, row: usize, choice: usize) -> f64 {
        let reps = &self.outcomes[row][choice];
        if reps.is_empty() {
            10.0 * self.cutoff
        } else {
            reps.iter().map(|o| o.par10).sum::<f64>() / reps.len() as f64
        }
    }

    /// Removes choices with no observation on any row and returns their ids.
    pub fn drop_unobserved(&mut self) -> Vec<String> {
        let keep: Vec<bool> = (0..self.choice_ids.len())
            .map(|c| self.outcomes.iter().any(|row| !row[c].is_empty()))
            .collect();
        let dropped: Vec<String> = self
            .choice_ids
            .iter()
            .zip(&keep)
            .filter(|(_, k)| !**k)
            .map(|(id, _)| id.clone())
            .collect();
        if dropped.is_empty() {
            return dropped;
        }
        retain_mask(&mut self.choice_ids, &keep);
        for row in &mut self.outcomes {
            retain_mask(row, &keep);
        }
        dropped
    }

    /// Maps each choice id to its column.
    pub fn choice_index(&self) -> HashMap<&str, usize> {
        self.choice_ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect()
    }
}

fn retain_mask<T>(v: &mut Vec<T>, keep: &[bool]) {
    let mut it = keep.iter();
    v.retain(|_| *it.next().unwrap());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aslib::scenario::tests::two_by_two;
    use crate::aslib::{Run, RunRecord, RunStatus};

    #[test]
    fn from_scenario_scores_runs() {
        let s = two_by_two();
        let t = TrainingSet::from_scenario(&s, &["i2".into(), "i1".into()]).unwrap();
        assert_eq!(t.mean_par10(0, 0), 1000.0);
        assert_eq!(t.mean_par10(0, 1), 1.0);
        assert_eq!(t.mean_par10(1, 0), 1.0);
        let o = t.outcomes[0][0][0];
        assert!(o.censored);
        assert_eq!(o.time, 100.0);
        assert!(TrainingSet::from_scenario(&s, &["nope".into()]).is_err());
    }

    #[test]
    fn repetitions_are_averaged() {
        let mut s = two_by_two();
        s.runs.push(Run {
            instance: "i1".into(),
            algorithm: "A".into(),
            repetition: 2,
            record: RunRecord::new(3.0, RunStatus::Ok),
        });
        let t = TrainingSet::from_scenario(&s, &["i1".into()]).unwrap();
        assert_eq!(t.mean_par10(0, 0), 2.0);
        assert_eq!(t.outcomes[0][0].len(), 2);
    }

    #[test]
    fn unobserved_choices_dropped() {
        let mut s = two_by_two();
        s.runs.retain(|r| r.algorithm != "B");
        let mut t = TrainingSet::from_scenario(&s, &s.instance_ids.clone()).unwrap();
        assert_eq!(t.drop_unobserved(), vec!["B".to_string()]);
        assert_eq!(t.choice_ids, vec!["A".to_string()]);
        assert!(t.outcomes.iter().all(|r| r.len() == 1));
    }

    #[test]
    fn matrix_outcomes() {
        let t = TrainingSet::from_matrix(
            vec!["s1".into(), "s2".into()],
            vec![vec![Some(0.0)]],
            &[vec![12.0, 1000.0]],
            100.0,
        )
        .unwrap();
        assert_eq!(t.outcomes[0][0][0], Outcome { par10: 12.0, time: 12.0, censored: false });
        assert!(t.outcomes[0][1][0].censored);
    }
}
