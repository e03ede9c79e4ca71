pub mod aslib;
pub mod baselines;
pub mod cli;
pub mod eval;
pub mod meta;
pub mod ml;
pub mod selectors;
pub mod synth;
