//! Shared input builders for the criterion benches.

use qmix_core::{BlochVector, SeededSampler};

/// Deterministic corpus of random state pairs for mixing benchmarks.
pub fn state_pairs(seed: u64, n: usize) -> Vec<(BlochVector, BlochVector)> {
    let mut s = SeededSampler::new(seed);
    (0..n)
        .map(|_| (s.sample_hs_state(), s.sample_hs_state()))
        .collect()
}
