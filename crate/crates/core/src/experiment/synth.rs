//! Synthetic weighted sets.

use std::collections::HashSet;

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::set::WeightedSet;

/// A uniform point of the `(l0 - 1)`-simplex scaled to total weight `l1`,
/// spread over `l0` distinct random 64-bit ids.
///
/// # Panics
/// If `l0 == 0` or `l1` is not positive and finite.
pub fn gen_set(l0: usize, l1: f64, rng: &mut impl Rng) -> WeightedSet {
    assert!(l0 >= 1, "l0 must be at least 1");
    assert!(l1.is_finite() && l1 > 0.0, "l1 must be positive, got {l1}");
    let mut seen = HashSet::with_capacity(l0);
    let mut ids = Vec::with_capacity(l0);
    while ids.len() < l0 {
        let id = rng.random::<u64>();
        if seen.insert(id) {
            ids.push(id);
        }
    }
    let raw: Vec<f64> = (0..l0).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let sum: f64 = raw.iter().sum();
    let pairs = ids.into_iter().zip(raw).map(|(id, e)| (id, e / sum * l1));
    WeightedSet::new(pairs).expect("generated weights are valid")
}

/// Builds `y` with `J(x, y) = target_j`: every weight of `x` is scaled by
/// `b = 2J / (1 + J)` and one new element receives `(1 - b) |x|_1`.
pub fn gen_pair(x: &WeightedSet, target_j: f64, rng: &mut impl Rng) -> Result<WeightedSet> {
    x.require_nonempty()?;
    if !(target_j > 0.0 && target_j <= 1.0) {
        return Err(Error::invalid(format!("target J must be in (0, 1], got {target_j}")));
    }
    let b = 2.0 * target_j / (1.0 + target_j);
    let extra = loop {
        let id = rng.random::<u64>();
        if x.weight(id).is_none() {
            break id;
        }
    };
    let scaled = x.iter().map(|(id, w)| (id, b * w));
    WeightedSet::new(scaled.chain(std::iter::once((extra, (1.0 - b) * x.l1()))))
}
