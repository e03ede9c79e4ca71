use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_matrix, MlError};

/// Per-feature standardization statistics. A zero `std` flags a constant
/// feature, which is mapped to 0 after standardization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

const CONSTANT_EPS: f64 = 1e-12;

impl Scaling {
    pub fn fit(x: &[Vec<f64>]) -> Self {
        let n = x.len() as f64;
        let d = x.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; d];
        for row in x {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for row in x {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let std = var
            .into_iter()
            .zip(&mean)
            .map(|(s, m)| {
                let sd = (s / n).sqrt();
                if sd <= CONSTANT_EPS * m.abs().max(1.0) {
                    0.0
                } else {
                    sd
                }
            })
            .collect();
        Self { mean, std }
    }

    pub fn is_constant(&self, j: usize) -> bool {
        self.std[j] == 0.0
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| if *s == 0.0 { 0.0 } else { (v - m) / s })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub scaling: Scaling,
}

impl RidgeModel {
    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64, MlError> {
        if x.len() != self.dim() {
            return Err(MlError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let z = self.scaling.transform(x);
        Ok(self.intercept + z.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum::<f64>())
    }
}

/// Closed-form ridge regression on standardized features with an unpenalized
/// intercept. Rank-deficient systems (possible with `lambda = 0`) fall back to
/// the minimum-norm least-squares solution.
pub fn fit_ridge(x: &[Vec<f64>], y: &[f64], lambda: f64) -> Result<RidgeModel, MlError> {
    let d = check_matrix(x)?;
    if y.len() != x.len() {
        return Err(MlError::DegenerateInput(format!("{} rows but {} targets", x.len(), y.len())));
    }
    if !(lambda >= 0.0) {
        return Err(MlError::DegenerateInput(format!("ridge lambda {lambda} must be nonnegative")));
    }
    let n = x.len();
    let scaling = Scaling::fit(x);
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let active: Vec<usize> = (0..d).filter(|&j| !scaling.is_constant(j)).collect();
    let mut coefficients = vec![0.0; d];

    if !active.is_empty() {
        let z = DMatrix::from_fn(n, active.len(), |i, k| {
            let j = active[k];
            (x[i][j] - scaling.mean[j]) / scaling.std[j]
        });
        let yc = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));
        let mut gram = z.transpose() * &z;
        for k in 0..active.len() {
            gram[(k, k)] += lambda;
        }
        let rhs = z.transpose() * yc;
        let beta = match gram.clone().cholesky() {
            Some(chol) if lambda > 0.0 || well_conditioned(&gram) => chol.solve(&rhs),
            _ => gram
                .svd(true, true)
                .solve(&rhs, 1e-10)
                .map_err(|e| MlError::DegenerateInput(format!("ridge solve failed: {e}")))?,
        };
        for (k, &j) in active.iter().enumerate() {
            coefficients[j] = beta[k];
        }
    }

    Ok(RidgeModel {
        coefficients,
        intercept: y_mean,
        scaling,
    })
}

fn well_conditioned(gram: &DMatrix<f64>) -> bool {
    let sv = gram.singular_values();
    let max = sv.max();
    let min = sv.min();
    max > 0.0 && min / max > 1e-12
}
