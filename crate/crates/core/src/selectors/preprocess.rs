use serde::{Deserialize, Serialize};

use super::SelectorError;
use crate::ml::Scaling;

/// Median imputation followed by z-scoring, both fitted on training rows.
/// A column that is missing everywhere imputes to 0 after standardization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preprocessing {
    pub medians: Vec<Option<f64>>,
    pub scaling: Scaling,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

fn present(v: Option<f64>) -> Option<f64> {
    v.filter(|x| x.is_finite())
}

impl Preprocessing {
    /// Fits on `rows` and returns the transformed rows alongside.
    pub fn fit(rows: &[Vec<Option<f64>>]) -> Result<(Self, Vec<Vec<f64>>), SelectorError> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || d == 0 {
            return Err(SelectorError::DegenerateInput("no training features".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(SelectorError::DimensionMismatch {
                expected: d,
                found: r.len(),
            });
        }
        let medians: Vec<Option<f64>> = (0..d)
            .map(|j| median(rows.iter().filter_map(|r| present(r[j])).collect()))
            .collect();
        let imputed: Vec<Vec<f64>> = rows.iter().map(|r| impute(&medians, r)).collect();
        let scaling = Scaling::fit(&imputed);
        let x = imputed.iter().map(|r| scaling.transform(r)).collect();
        Ok((Self { medians, scaling }, x))
    }

    pub fn dim(&self) -> usize {
        self.medians.len()
    }

    pub fn transform(&self, x: &[Option<f64>]) -> Result<Vec<f64>, SelectorError> {
        if x.len() != self.dim() {
            return Err(SelectorError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self.scaling.transform(&impute(&self.medians, x)))
    }
}

fn impute(medians: &[Option<f64>], row: &[Option<f64>]) -> Vec<f64> {
    row.iter()
        .zip(medians)
        .map(|(v, m)| present(*v).or(*m).unwrap_or(0.0))
        .collect()
}
