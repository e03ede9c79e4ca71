use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::knn::squared_distance;
use super::{check_dim, check_matrix, MlError};

pub const MAX_LLOYD_ITERATIONS: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansModel {
    pub centroids: Vec<Vec<f64>>,
    pub k: usize,
    pub seed: u64,
    /// Training assignment of every input row.
    pub assignments: Vec<usize>,
    /// Within-cluster SSE after each assignment step.
    pub sse_trace: Vec<f64>,
}

impl KMeansModel {
    /// Index of the nearest centroid; ties go to the lowest index.
    pub fn assign(&self, x: &[f64]) -> Result<usize, MlError> {
        check_dim(self.centroids[0].len(), x)?;
        Ok(nearest(&self.centroids, x).0)
    }

    pub fn sse(&self, x: &[Vec<f64>]) -> f64 {
        x.iter().map(|r| nearest(&self.centroids, r).1).sum()
    }
}

fn nearest(centroids: &[Vec<f64>], x: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = squared_distance(c, x);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Lloyd's algorithm from k-means++ seeding. Stops once assignments are
/// stable or after [`MAX_LLOYD_ITERATIONS`]; an emptied cluster is re-seeded
/// at the point farthest from its current centroid.
pub fn fit_kmeans(x: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansModel, MlError> {
    check_matrix(x)?;
    let n = x.len();
    if k == 0 || k > n {
        return Err(MlError::DegenerateInput(format!("k = {k} with {n} points")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_seeds(x, k, &mut rng);

    let mut assignments = vec![usize::MAX; n];
    let mut sse_trace = Vec::new();
    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut changed = false;
        let mut sse = 0.0;
        let mut dist = vec![0.0; n];
        for (i, row) in x.iter().enumerate() {
            let (j, d) = nearest(&centroids, row);
            if assignments[i] != j {
                assignments[i] = j;
                changed = true;
            }
            dist[i] = d;
            sse += d;
        }

        // Re-seed empty clusters, taking points away from populated ones.
        let mut counts = vec![0usize; k];
        for &a in &assignments {
            counts[a] += 1;
        }
        for j in 0..k {
            if counts[j] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| counts[assignments[i]] > 1)
                .max_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(b.cmp(&a)));
            if let Some(i) = far {
                counts[assignments[i]] -= 1;
                sse -= dist[i];
                dist[i] = 0.0;
                assignments[i] = j;
                counts[j] = 1;
                centroids[j] = x[i].clone();
                changed = true;
            }
        }
        sse_trace.push(sse);
        if !changed {
            break;
        }

        let d = x[0].len();
        let mut sums = vec![vec![0.0; d]; k];
        for (row, &a) in x.iter().zip(&assignments) {
            for (s, v) in sums[a].iter_mut().zip(row) {
                *s += v;
            }
        }
        for (j, s) in sums.into_iter().enumerate() {
            if counts[j] > 0 {
                centroids[j] = s.into_iter().map(|v| v / counts[j] as f64).collect();
            }
        }
    }

    Ok(KMeansModel {
        centroids,
        k,
        seed,
        assignments,
        sse_trace,
    })
}

fn plus_plus_seeds<R: Rng>(x: &[Vec<f64>], k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut centroids = vec![x[rng.random_range(0..n)].clone()];
    let mut dist: Vec<f64> = x.iter().map(|r| squared_distance(r, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, d) in dist.iter().enumerate() {
                if *d <= 0.0 {
                    continue;
                }
                if target < *d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            if dist[chosen] <= 0.0 {
                chosen = (0..n).rev().find(|&i| dist[i] > 0.0).unwrap_or(chosen);
            }
            chosen
        } else {
            // Only duplicates of existing centroids remain.
            rng.random_range(0..n)
        };
        let c = x[pick].clone();
        for (d, r) in dist.iter_mut().zip(x) {
            *d = d.min(squared_distance(r, &c));
        }
        centroids.push(c);
    }
    centroids
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Best SSE over all assignments of 1-d points to two nonempty clusters.
    fn brute_force_two_means(points: &[f64]) -> (f64, Vec<f64>) {
        let n = points.len();
        let mut best = (f64::INFINITY, vec![]);
        for mask in 1..(1u32 << n) - 1 {
            let (a, b): (Vec<f64>, Vec<f64>) = (0..n).map(|i| (i, points[i])).fold((vec![], vec![]), |(mut a, mut b), (i, p)| {
                if mask & (1 << i) != 0 {
                    a.push(p)
                } else {
                    b.push(p)
                }
                (a, b)
            });
            let ma = a.iter().sum::<f64>() / a.len() as f64;
            let mb = b.iter().sum::<f64>() / b.len() as f64;
            let sse = a.iter().map(|p| (p - ma).powi(2)).sum::<f64>() + b.iter().map(|p| (p - mb).powi(2)).sum::<f64>();
            if sse < best.0 {
                let mut c = vec![ma, mb];
                c.sort_by(f64::total_cmp);
                best = (sse, c);
            }
        }
        best
    }

    #[test]
    fn two_clusters_in_one_dimension() {
        let pts = [0.0, 1.0, 10.0, 11.0];
        let (oracle_sse, oracle_centroids) = brute_force_two_means(&pts);
        assert_eq!(oracle_centroids, vec![0.5, 10.5]);
        let x: Vec<Vec<f64>> = pts.iter().map(|&p| vec![p]).collect();
        for seed in 0..10 {
            let m = fit_kmeans(&x, 2, seed).unwrap();
            let mut c: Vec<f64> = m.centroids.iter().map(|c| c[0]).collect();
            c.sort_by(f64::total_cmp);
            assert_eq!(c, oracle_centroids);
            assert!((m.sse(&x) - oracle_sse).abs() < 1e-12);
        }
    }

    #[test]
    fn k_equals_n() {
        let x: Vec<Vec<f64>> = vec![vec![0.0, 1.0], vec![3.0, 1.0], vec![-2.0, 5.0], vec![4.0, 4.0]];
        let m = fit_kmeans(&x, 4, 3).unwrap();
        assert_eq!(m.sse(&x), 0.0);
    }

    #[test]
    fn k_one_is_mean() {
        let x: Vec<Vec<f64>> = vec![vec![0.0, 1.0], vec![3.0, 1.0], vec![-3.0, 7.0]];
        let m = fit_kmeans(&x, 1, 0).unwrap();
        assert_eq!(m.centroids, vec![vec![0.0, 3.0]]);
    }

    #[test]
    fn degenerate() {
        assert!(fit_kmeans(&[vec![1.0]], 2, 0).is_err());
        assert!(fit_kmeans(&[vec![1.0]], 0, 0).is_err());
    }

    #[test]
    fn duplicates_with_large_k() {
        let x = vec![vec![1.0]; 5];
        let m = fit_kmeans(&x, 3, 0).unwrap();
        assert_eq!(m.sse(&x), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn lloyd_invariants(
            pts in prop::collection::vec((-50i32..50, -50i32..50), 2..40),
            k in 1usize..6,
            seed in any::<u64>(),
        ) {
            let x: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.0 as f64, p.1 as f64]).collect();
            let k = k.min(x.len());
            let m = fit_kmeans(&x, k, seed).unwrap();
            prop_assert!(m.sse_trace.windows(2).all(|w| w[1] <= w[0] + 1e-9));
            // converged runs end with every point at its nearest centroid
            if m.sse_trace.len() < MAX_LLOYD_ITERATIONS {
                for (row, &a) in x.iter().zip(&m.assignments) {
                    let (j, d) = nearest(&m.centroids, row);
                    prop_assert!(j == a || (squared_distance(&m.centroids[a], row) - d).abs() < 1e-9);
                }
            }
            prop_assert!(m.centroids.iter().flatten().all(|v| v.is_finite()));
            prop_assert_eq!(&m, &fit_kmeans(&x, k, seed).unwrap());
        }
    }
}
