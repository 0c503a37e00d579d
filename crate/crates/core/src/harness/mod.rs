//! Synthetic workloads and empirical evaluation of the sequence model.

pub mod markov;
pub mod sweep;

pub use markov::{alphabet, MarkovGenerator};
pub use sweep::{evaluate, sweep, SweepConfig, SweepReport, SweepRow};
