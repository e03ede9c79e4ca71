use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::aslib::RunStatus;

/// Penalized runtime: the runtime of a successful run within the cutoff,
/// `10 * cutoff` for anything else.
pub fn par10(runtime: f64, status: RunStatus, cutoff: f64) -> f64 {
    if status.is_ok() && runtime <= cutoff {
        runtime
    } else {
        10.0 * cutoff
    }
}

/// Rescales `score` so the oracle maps to 0 and the single best solver to 1.
pub fn npar10(score: f64, oracle_score: f64, sbs_score: f64) -> Result<f64, EvalError> {
    let gap = sbs_score - oracle_score;
    if gap.abs() <= 1e-12 * sbs_score.abs().max(oracle_score.abs()).max(1.0) {
        return Err(EvalError::DegenerateGap {
            oracle: oracle_score,
            sbs: sbs_score,
        });
    }
    Ok((score - oracle_score) / gap)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    pub n_folds: usize,
    /// Folds dropped from each end before averaging.
    pub crop: usize,
    pub seed: u64,
    pub use_fold_hints: bool,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            n_folds: 10,
            crop: 2,
            seed: 0,
            use_fold_hints: false,
        }
    }
}

impl Protocol {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.n_folds < 2 || 2 * self.crop >= self.n_folds {
            return Err(EvalError::InvalidProtocol(format!(
                "need n_folds >= 2 and 2*crop < n_folds, got n_folds={} crop={}",
                self.n_folds, self.crop
            )));
        }
        Ok(())
    }
}

/// Fold index per instance. Uses `fold_hints` when the protocol asks for them
/// and they exist; otherwise a seeded shuffle dealt round-robin, so fold sizes
/// differ by at most one.
pub fn make_folds(n_instances: usize, fold_hints: Option<&[usize]>, protocol: &Protocol) -> Result<Vec<usize>, EvalError> {
    if let (true, Some(hints)) = (protocol.use_fold_hints, fold_hints) {
        if hints.len() != n_instances {
            return Err(EvalError::DegenerateInput(format!(
                "{} fold hints for {n_instances} instances",
                hints.len()
            )));
        }
        // Renumber hint folds densely so empty hint folds do not count.
        let mut used: Vec<usize> = hints.to_vec();
        used.sort_unstable();
        used.dedup();
        return Ok(hints.iter().map(|h| used.binary_search(h).unwrap()).collect());
    }
    if n_instances < protocol.n_folds {
        return Err(EvalError::TooFewInstances {
            instances: n_instances,
            folds: protocol.n_folds,
        });
    }
    let mut order: Vec<usize> = (0..n_instances).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(protocol.seed));
    let mut folds = vec![0; n_instances];
    for (k, &i) in order.iter().enumerate() {
        folds[i] = k % protocol.n_folds;
    }
    Ok(folds)
}

/// Mean after dropping the `crop` smallest and `crop` largest values.
pub fn cropped_mean(values: &[f64], crop: usize) -> Result<f64, EvalError> {
    if values.len() <= 2 * crop {
        return Err(EvalError::DegenerateInput(format!(
            "cannot crop {crop} from each end of {} values",
            values.len()
        )));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let kept = &v[crop..v.len() - crop];
    Ok(kept.iter().sum::<f64>() / kept.len() as f64)
}
