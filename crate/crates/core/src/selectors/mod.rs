//! The seven base algorithm selectors behind one interface: fit on training
//! instances, then map a raw feature vector to per-choice scores (lower is
//! better) and to the argmin choice.

mod preprocess;
mod trained;
mod training;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ml::{ForestConfig, MlError};

pub use preprocess::Preprocessing;
pub use trained::{select_from_scores, tally_pairwise, train_on, train_selector, PairModel, SelectorModel, TrainedSelector};
pub use training::{Outcome, TrainingSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectorError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid selector spec: {0}")]
    InvalidSpec(String),
    #[error("unknown selector family '{0}'; valid names: {names}", names = Family::name_list())]
    UnknownFamily(String),
    #[error(transparent)]
    Ml(MlError),
}

impl From<MlError> for SelectorError {
    fn from(e: MlError) -> Self {
        match e {
            MlError::DimensionMismatch { expected, found } => SelectorError::DimensionMismatch { expected, found },
            other => SelectorError::Ml(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    PAReg,
    Mcc,
    Isac,
    Sunny,
    SatZilla11,
    R2SExp,
    R2SPar10,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::PAReg,
        Family::Mcc,
        Family::Isac,
        Family::Sunny,
        Family::SatZilla11,
        Family::R2SExp,
        Family::R2SPar10,
    ];

    /// Lower-case name used on the command line and in config files.
    pub fn key(self) -> &'static str {
        match self {
            Family::PAReg => "pareg",
            Family::Mcc => "mcc",
            Family::Isac => "isac",
            Family::Sunny => "sunny",
            Family::SatZilla11 => "satzilla11",
            Family::R2SExp => "r2sexp",
            Family::R2SPar10 => "r2spar10",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Family::PAReg => "PAReg",
            Family::Mcc => "MCC",
            Family::Isac => "ISAC",
            Family::Sunny => "SUNNY",
            Family::SatZilla11 => "SATzilla'11",
            Family::R2SExp => "R2SExp",
            Family::R2SPar10 => "R2SPAR10",
        }
    }

    pub fn name_list() -> String {
        Family::ALL.map(Family::key).join(", ")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for Family {
    type Err = SelectorError;

    /// Accepts the key or the display name, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.key() == t || f.display_name().to_ascii_lowercase() == t)
            .ok_or_else(|| SelectorError::UnknownFamily(s.trim().to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub ridge_lambda: f64,
    pub forest: ForestConfig,
    pub sunny_k: usize,
    /// Number of ISAC clusters; `None` means `ceil(sqrt(n / 2))`.
    pub isac_k: Option<usize>,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Self {
            ridge_lambda: 1.0,
            forest: ForestConfig::default(),
            sunny_k: 16,
            isac_k: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorSpec {
    pub family: Family,
    pub hyper: Hyperparameters,
    pub seed: u64,
}

impl SelectorSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            hyper: Hyperparameters::default(),
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_hyper(mut self, hyper: Hyperparameters) -> Self {
        self.hyper = hyper;
        self
    }

    pub fn validate(&self) -> Result<(), SelectorError> {
        let h = &self.hyper;
        if !(h.ridge_lambda.is_finite() && h.ridge_lambda >= 0.0) {
            return Err(SelectorError::InvalidSpec(format!("ridge lambda {} must be >= 0", h.ridge_lambda)));
        }
        if h.sunny_k == 0 {
            return Err(SelectorError::InvalidSpec("SUNNY k must be >= 1".into()));
        }
        if h.isac_k == Some(0) {
            return Err(SelectorError::InvalidSpec("ISAC k must be >= 1".into()));
        }
        h.forest.validate().map_err(|e| SelectorError::InvalidSpec(e.to_string()))
    }
}
