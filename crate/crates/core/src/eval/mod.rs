//! Scoring, the cross-validation protocol, reports and win/tie/loss tables.

mod evaluate;
mod report;
mod scoring;
mod wtl;

use thiserror::Error;

pub use evaluate::{evaluate, EvalConfig};
pub use report::{
    emit_report, ApproachReport, BaselineScore, Baselines, Brackets, EvalReport, FoldSummary, Level, Normalized,
    Provenance, ReportFormat,
};
pub use scoring::{cropped_mean, make_folds, npar10, par10, Protocol};
pub use wtl::{win_tie_loss, wtl_markdown, wtl_table, WinTieLoss, WtlCell, DEFAULT_TIE_EPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("oracle and single best coincide ({oracle}); nPAR10 is undefined")]
    DegenerateGap { oracle: f64, sbs: f64 },
    #[error("{instances} instances cannot fill {folds} folds")]
    TooFewInstances { instances: usize, folds: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),
    #[error("invalid scenario: {}", .0.join("; "))]
    InvalidScenario(Vec<String>),
    #[error("fold {fold}: {message}")]
    Fold { fold: usize, message: String },
    #[error("score sets cover different scenarios: {0}")]
    KeyMismatch(String),
}
