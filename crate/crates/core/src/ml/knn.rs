use super::{check_dim, check_matrix, MlError};

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices of the `k` rows of `x` closest to `q` in Euclidean distance,
/// nearest first; ties go to the lower row index. Returns every row when
/// `k >= x.len()`.
pub fn nearest_neighbors(x: &[Vec<f64>], q: &[f64], k: usize) -> Result<Vec<usize>, MlError> {
    let d = check_matrix(x)?;
    check_dim(d, q)?;
    if k == 0 {
        return Err(MlError::DegenerateInput("k must be positive".into()));
    }
    let mut scored: Vec<(f64, usize)> = x.iter().enumerate().map(|(i, r)| (squared_distance(r, q), i)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.truncate(k);
    Ok(scored.into_iter().map(|(_, i)| i).collect())
}
