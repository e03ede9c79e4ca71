//! Oracle and single-best baselines over a performance matrix. Applied to
//! algorithm columns they give the virtual best and single best solver;
//! applied to selector columns, the AS-oracle and single best selector.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aslib::Scenario;
use crate::eval::par10;
use crate::selectors::select_from_scores;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("performance matrix has no rows or no columns")]
    EmptyMatrix,
    #[error("malformed performance matrix: {0}")]
    Malformed(String),
    #[error("unknown instance '{0}'")]
    UnknownRow(String),
}

/// PAR10 per (row, column), averaged over repetitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceMatrix {
    pub row_ids: Vec<String>,
    pub col_ids: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl PerformanceMatrix {
    pub fn new(row_ids: Vec<String>, col_ids: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self, BaselineError> {
        if values.len() != row_ids.len() || values.iter().any(|r| r.len() != col_ids.len()) {
            return Err(BaselineError::Malformed(format!(
                "expected {}x{} values",
                row_ids.len(),
                col_ids.len()
            )));
        }
        if values.iter().flatten().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(BaselineError::Malformed("values must be finite and nonnegative".into()));
        }
        Ok(Self { row_ids, col_ids, values })
    }

    /// Base-level matrix of `s` on `rows`. Pairs without a run score `10 C`.
    pub fn from_scenario(s: &Scenario, rows: &[String]) -> Result<Self, BaselineError> {
        let index = s.instance_index();
        let table = s.run_table();
        let values = rows
            .iter()
            .map(|id| {
                let &i = index.get(id.as_str()).ok_or_else(|| BaselineError::UnknownRow(id.clone()))?;
                Ok(table[i]
                    .iter()
                    .map(|reps| {
                        if reps.is_empty() {
                            10.0 * s.cutoff
                        } else {
                            reps.iter().map(|r| par10(r.runtime, r.status, s.cutoff)).sum::<f64>() / reps.len() as f64
                        }
                    })
                    .collect())
            })
            .collect::<Result<_, BaselineError>>()?;
        Self::new(rows.to_vec(), s.algorithm_ids.clone(), values)
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn col_index(&self, id: &str) -> Option<usize> {
        self.col_ids.iter().position(|c| c == id)
    }

    pub fn column_mean(&self, col: usize) -> f64 {
        self.values.iter().map(|r| r[col]).sum::<f64>() / self.n_rows() as f64
    }

    /// Mean value of one chosen column per row.
    pub fn mean_of_choices(&self, choices: &[usize]) -> f64 {
        self.values.iter().zip(choices).map(|(r, &c)| r[c]).sum::<f64>() / self.n_rows() as f64
    }

    fn check_nonempty(&self) -> Result<(), BaselineError> {
        if self.row_ids.is_empty() || self.col_ids.is_empty() {
            Err(BaselineError::EmptyMatrix)
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleAssignment {
    pub choices: Vec<String>,
    pub values: Vec<f64>,
    pub mean: f64,
}

/// Per-row best column (lexicographic tie-break) and the mean of the row
/// minima.
pub fn oracle_assignment(p: &PerformanceMatrix) -> Result<OracleAssignment, BaselineError> {
    p.check_nonempty()?;
    let (choices, values): (Vec<String>, Vec<f64>) = p
        .values
        .iter()
        .map(|row| {
            let c = select_from_scores(row, &p.col_ids);
            (p.col_ids[c].clone(), row[c])
        })
        .unzip();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(OracleAssignment { choices, values, mean })
}

/// Column with the lowest mean (lexicographic tie-break) and that mean.
pub fn single_best(p: &PerformanceMatrix) -> Result<(String, f64), BaselineError> {
    p.check_nonempty()?;
    let means: Vec<f64> = (0..p.col_ids.len()).map(|c| p.column_mean(c)).collect();
    let c = select_from_scores(&means, &p.col_ids);
    Ok((p.col_ids[c].clone(), means[c]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aslib::scenario::tests::two_by_two;
    use proptest::prelude::*;

    fn matrix(values: Vec<Vec<f64>>) -> PerformanceMatrix {
        let rows = (0..values.len()).map(|i| format!("r{i}")).collect();
        let cols = (0..values[0].len()).map(|j| format!("col{}", j + 1)).collect();
        PerformanceMatrix::new(rows, cols, values).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let o = oracle_assignment(&matrix(vec![vec![3.0, 1.0], vec![2.0, 5.0]])).unwrap();
        assert_eq!(o.choices, vec!["col2", "col1"]);
        assert_eq!(o.mean, 1.5);

        let o = oracle_assignment(&matrix(vec![vec![4.0], vec![6.0]])).unwrap();
        assert_eq!(o.choices, vec!["col1", "col1"]);
        assert_eq!(o.mean, 5.0);

        let o = oracle_assignment(&matrix(vec![vec![2.0; 3]; 4])).unwrap();
        assert!(o.choices.iter().all(|c| c == "col1"));
    }

    #[test]
    fn single_best_examples() {
        assert_eq!(
            single_best(&matrix(vec![vec![3.0, 1.0], vec![2.0, 5.0]])).unwrap(),
            ("col1".to_string(), 2.5)
        );
        let one = matrix(vec![vec![7.0, 4.0, 9.0]]);
        assert_eq!(single_best(&one).unwrap().0, oracle_assignment(&one).unwrap().choices[0]);
        assert_eq!(single_best(&matrix(vec![vec![1.0, 2.0], vec![2.0, 1.0]])).unwrap().0, "col1");
    }

    #[test]
    fn empty_and_malformed() {
        let empty = PerformanceMatrix::new(vec![], vec!["a".into()], vec![]).unwrap();
        assert_eq!(oracle_assignment(&empty), Err(BaselineError::EmptyMatrix));
        assert_eq!(single_best(&empty), Err(BaselineError::EmptyMatrix));
        assert!(PerformanceMatrix::new(vec!["r".into()], vec!["a".into()], vec![vec![-1.0]]).is_err());
        assert!(PerformanceMatrix::new(vec!["r".into()], vec!["a".into()], vec![vec![]]).is_err());
    }

    #[test]
    fn from_scenario_fills_missing_pairs() {
        let mut s = two_by_two();
        s.runs.retain(|r| !(r.instance == "i2" && r.algorithm == "B"));
        let p = PerformanceMatrix::from_scenario(&s, &s.instance_ids).unwrap();
        assert_eq!(p.values, vec![vec![1.0, 1000.0], vec![1000.0, 1000.0]]);
        assert!(PerformanceMatrix::from_scenario(&s, &["x".into()]).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = PerformanceMatrix> {
        (1usize..12, 1usize..6).prop_flat_map(|(n, m)| {
            prop::collection::vec(prop::collection::vec(0.0f64..1000.0, m), n).prop_map(matrix)
        })
    }

    proptest! {
        #[test]
        fn oracle_is_a_lower_bound(p in arb_matrix(), rule in prop::collection::vec(any::<prop::sample::Index>(), 12)) {
            let o = oracle_assignment(&p).unwrap();
            let m = p.col_ids.len();
            for c in 0..m {
                prop_assert!(o.mean <= p.column_mean(c) + 1e-9);
            }
            let choices: Vec<usize> = (0..p.n_rows()).map(|r| rule[r].index(m)).collect();
            prop_assert!(o.mean <= p.mean_of_choices(&choices) + 1e-9);
            prop_assert!(single_best(&p).unwrap().1 >= o.mean - 1e-9);
        }

        #[test]
        fn choices_invariant_under_scaling(p in arb_matrix(), e in -8i32..8) {
            // powers of two scale exactly, so no ties appear or vanish
            let k = 2f64.powi(e);
            let mut q = p.clone();
            q.values.iter_mut().flatten().for_each(|v| *v *= k);
            prop_assert_eq!(oracle_assignment(&p).unwrap().choices, oracle_assignment(&q).unwrap().choices);
            prop_assert_eq!(single_best(&p).unwrap().0, single_best(&q).unwrap().0);
        }
    }
}
