//! Shared fixtures for the benchmark targets.

use srdp_core::noiseless::DistortionMeasure;
use srdp_core::osrb::OsrbConfig;
use srdp_core::prob::{Channel, Pmf, DEFAULT_ENUM_CAP};

/// A random-looking but fixed 4x5 channel for capacity benchmarks.
pub fn capacity_channel() -> Channel {
    Channel::from_rows(vec![
        vec![0.42, 0.18, 0.20, 0.12, 0.08],
        vec![0.05, 0.55, 0.10, 0.10, 0.20],
        vec![0.23, 0.07, 0.39, 0.21, 0.10],
        vec![0.11, 0.13, 0.06, 0.50, 0.20],
    ])
    .expect("stochastic rows")
}

/// The symmetric binary cascade used throughout the experiments, at
/// blocklength `n`.
pub fn symmetric_osrb(n: usize) -> OsrbConfig {
    OsrbConfig::new(
        n,
        0.45,
        0.45,
        Pmf::uniform(2),
        Pmf::uniform(2),
        Channel::bsc(0.2).expect("valid crossover"),
        Channel::bsc(0.2).expect("valid crossover"),
        DistortionMeasure::hamming(2),
        7,
        DEFAULT_ENUM_CAP,
    )
    .expect("within caps")
}
