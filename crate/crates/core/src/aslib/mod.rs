//! ASlib scenario directories: ARFF parsing, the in-memory [`Scenario`]
//! model, validation and writing.

pub mod arff;
mod io;
pub(crate) mod scenario;

use std::path::PathBuf;

use thiserror::Error;

pub use arff::{parse_arff, write_arff, ArffError, Attribute, AttributeKind, RelationTable, Value};
pub use io::{
    load_scenario, load_scenario_with, parse_description, write_scenario, LoadOptions, COSTS_FILE, CV_FILE,
    DESCRIPTION_FILE, FEATURES_FILE, RUNS_FILE,
};
pub use scenario::{validate_scenario, Run, RunRecord, RunStatus, Scenario};

#[derive(Debug, Error)]
pub enum AslibError {
    #[error("required file {0} is missing")]
    MissingFile(PathBuf),
    #[error("{}: {source}", file.display())]
    Arff { file: PathBuf, source: ArffError },
    #[error("{}: run references instance `{instance}` without a feature row", file.display())]
    UnknownInstance { instance: String, file: PathBuf },
    #[error("{}: no usable `algorithm_cutoff_time`", .0.display())]
    NoCutoff(PathBuf),
    #[error("{}: {message}", file.display())]
    Schema { file: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("scenario is invalid: {}", .0.join("; "))]
    Invalid(Vec<String>),
}
