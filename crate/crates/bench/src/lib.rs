//! Workloads shared by the criterion benchmarks.

use dartminhash::experiment::timing::{cell_sets, TimingCell};
use dartminhash::WeightedSet;

pub const SEED: u64 = 0x5eed;

/// `count` synthetic sets with the given support size and total weight.
pub fn workload(l0: usize, l1: f64, count: usize) -> Vec<WeightedSet> {
    cell_sets(&TimingCell { k: 0, l0, l1 }, count, SEED)
}
