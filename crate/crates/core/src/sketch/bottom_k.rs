use std::sync::Arc;

use crate::darthash::{Dart, DartHasher};
use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::set::WeightedSet;

/// The first `k` darts hitting a set, ascending by rank.
#[derive(Debug, Clone, PartialEq)]
pub struct BottomKSketch {
    darts: Vec<Dart>,
    seed: u64,
}

impl BottomKSketch {
    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn k(&self) -> usize {
        self.darts.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fingerprints(&self) -> impl Iterator<Item = u64> + '_ {
        self.darts.iter().map(|d| d.fingerprint)
    }
}

/// Bottom-k sketcher: DartHash at `t = k`, increasing `phi` until at least
/// `k` darts are found.
#[derive(Debug, Clone)]
pub struct BottomK {
    k: usize,
    hasher: DartHasher,
}

impl BottomK {
    pub fn new(k: usize, seed: u64) -> Result<Self> {
        Self::with_hashes(k, Arc::new(HashFamily::new(seed)))
    }

    pub fn with_hashes(k: usize, hashes: Arc<HashFamily>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("sketch length k must be at least 1"));
        }
        Ok(Self { k, hasher: DartHasher::new(k as u64, hashes)? })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sketch(&self, x: &WeightedSet) -> Result<BottomKSketch> {
        x.require_nonempty()?;
        let mut darts = Vec::new();
        let mut phi = 0.0;
        let limit = loop {
            phi += 1.0;
            let limit = phi / x.l1();
            self.hasher.darts_below_rank_into(x, limit, &mut darts)?;
            if darts.len() >= self.k {
                break limit;
            }
        };
        let darts = smallest_by_rank(darts, self.k, limit);
        Ok(BottomKSketch { darts, seed: self.hasher.hashes().seed() })
    }
}

/// Returns the `k` lowest-rank darts in order. Ranks lie in `[0, limit]` and
/// are uniform there, so a bucket sort with one bucket per dart runs in
/// expected linear time.
pub(crate) fn smallest_by_rank(darts: Vec<Dart>, k: usize, limit: f64) -> Vec<Dart> {
    let n = darts.len();
    if n == 0 {
        return darts;
    }
    let scale = n as f64 / limit;
    let bucket_of = |d: &Dart| ((d.rank * scale) as usize).min(n - 1);

    let mut starts = vec![0usize; n + 1];
    for d in &darts {
        starts[bucket_of(d) + 1] += 1;
    }
    for b in 0..n {
        starts[b + 1] += starts[b];
    }
    let mut cursor = starts.clone();
    let mut placed = vec![darts[0]; n];
    for d in darts {
        let b = bucket_of(&d);
        placed[cursor[b]] = d;
        cursor[b] += 1;
    }
    // Only buckets up to the one containing the k-th dart need ordering.
    let mut end = 0;
    for b in 0..n {
        if end >= k {
            break;
        }
        let bucket = &mut placed[starts[b]..starts[b + 1]];
        if bucket.len() > 1 {
            bucket.sort_unstable_by(Dart::rank_cmp);
        }
        end = starts[b + 1];
    }
    placed.truncate(k.min(n));
    placed
}

/// Weighted Jaccard estimate from two bottom-k sketches: among the `k`
/// lowest-rank darts of the union, the fraction present in both sketches.
pub fn estimate_jaccard_bottom_k(a: &BottomKSketch, b: &BottomKSketch) -> Result<f64> {
    if a.k() != b.k() {
        return Err(Error::LengthMismatch { left: a.k(), right: b.k() });
    }
    if a.seed != b.seed {
        return Err(Error::SeedMismatch { left: a.seed, right: b.seed });
    }
    let k = a.k();
    if k == 0 {
        return Err(Error::invalid("empty sketches"));
    }
    let (mut i, mut j, mut taken, mut shared) = (0, 0, 0, 0);
    while taken < k && (i < k || j < k) {
        match (a.darts.get(i), b.darts.get(j)) {
            (Some(x), Some(y)) if x.index == y.index => {
                shared += 1;
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) => {
                if x.rank_cmp(y).is_lt() {
                    i += 1;
                } else {
                    j += 1;
                }
            }
            (Some(_), None) => i += 1,
            (None, Some(_)) => j += 1,
            (None, None) => unreachable!(),
        }
        taken += 1;
    }
    Ok(shared as f64 / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darthash::sort_by_rank;
    use crate::experiment::synth::{gen_pair, gen_set};
    use crate::sketch::DartMinHash;
    use crate::testutil::{random_set, rng};
    use proptest::prelude::*;

    #[test]
    fn k_one_matches_single_minhash() {
        let mut g = rng(5);
        for seed in 0..20 {
            let x = random_set(&mut g, 12, u64::MAX, 0.01, 4.0);
            let bk = BottomK::new(1, seed).unwrap().sketch(&x).unwrap();
            let mh = DartMinHash::new(1, seed).unwrap().run(&x).unwrap();
            assert_eq!(bk.darts(), &mh.darts[..]);
        }
    }

    #[test]
    fn output_is_strictly_increasing_and_first_k() {
        let mut g = rng(6);
        for seed in 0..30 {
            let k = 1 + (seed as usize * 37) % 300;
            let bk = BottomK::new(k, seed).unwrap();
            let x = gen_set(40, 3.0, &mut g);
            let s = bk.sketch(&x).unwrap();
            assert_eq!(s.k(), k);
            assert!(s.darts().windows(2).all(|w| w[0].rank_cmp(&w[1]).is_lt()));
            let mut all = bk.hasher.darts(&x, 20.0).unwrap();
            sort_by_rank(&mut all);
            assert_eq!(s.darts(), &all[..k]);
            assert_eq!(s, bk.sketch(&x).unwrap());
        }
    }

    #[test]
    fn estimator_behaviour() {
        let bk = BottomK::new(256, 1).unwrap();
        let mut g = rng(9);
        let x = gen_set(100, 1.0, &mut g);
        let sx = bk.sketch(&x).unwrap();
        assert_eq!(estimate_jaccard_bottom_k(&sx, &sx).unwrap(), 1.0);

        let (mut sum, n) = (0.0, 300);
        for s in 0..n {
            let bk = BottomK::new(128, 100 + s).unwrap();
            let x = gen_set(30, 1.0, &mut g);
            let y = gen_pair(&x, 0.5, &mut g).unwrap();
            sum += estimate_jaccard_bottom_k(&bk.sketch(&x).unwrap(), &bk.sketch(&y).unwrap()).unwrap();
        }
        let mean = sum / n as f64;
        // Bottom-k variance is at most the binomial one.
        assert!((mean - 0.5).abs() < 3.0 * (0.25 / (128.0 * n as f64)).sqrt(), "mean {mean}");
    }

    proptest! {
        #[test]
        fn bucket_sort_agrees_with_comparison_sort(ranks in proptest::collection::vec(0.0f64..1.0, 1..200), k in 1usize..250) {
            let darts: Vec<Dart> = ranks.iter().enumerate().map(|(n, &rank)| Dart {
                index: crate::hashing::DartIndex { element: n as u64 % 7, j: n as u16, ..Default::default() },
                weight: 0.0,
                rank,
                fingerprint: n as u64,
            }).collect();
            let mut expected = darts.clone();
            sort_by_rank(&mut expected);
            expected.truncate(k);
            prop_assert_eq!(smallest_by_rank(darts, k, 1.0), expected);
        }
    }
}
