use std::sync::Arc;

use crate::darthash::{Dart, DartHasher};
use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::set::WeightedSet;

/// Parameters of a k-minhash sketcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchParams {
    pub k: usize,
    /// Dart density.
    pub t: u64,
    pub seed: u64,
}

impl SketchParams {
    /// `t = ceil(k ln k) + k`, which is 1 for `k = 1`.
    pub fn minhash(k: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("sketch length k must be at least 1"));
        }
        Ok(Self { k, t: minhash_density(k), seed })
    }
}

pub fn minhash_density(k: usize) -> u64 {
    if k <= 1 {
        return 1;
    }
    let k = k as f64;
    (k * k.ln()).ceil() as u64 + k as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinHashSketch {
    values: Vec<u64>,
    seed: u64,
}

impl MinHashSketch {
    pub fn new(values: Vec<u64>, seed: u64) -> Self {
        Self { values, seed }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Result of one sketch computation with its diagnostics.
#[derive(Debug, Clone)]
pub struct MinHashRun {
    /// Minimum-rank dart of each bucket.
    pub darts: Vec<Dart>,
    /// Number of `phi` steps needed to fill every bucket.
    pub steps: u32,
}

/// k independent weighted minhashes from DartHash.
///
/// Darts are drawn at `phi = 1, 2, ...` and hashed into `k` buckets until no
/// bucket is empty; the value of bucket `j` is the fingerprint of its
/// minimum-rank dart.
#[derive(Debug, Clone)]
pub struct DartMinHash {
    params: SketchParams,
    hasher: DartHasher,
}

impl DartMinHash {
    pub fn new(k: usize, seed: u64) -> Result<Self> {
        Self::with_hashes(k, Arc::new(HashFamily::new(seed)))
    }

    pub fn with_hashes(k: usize, hashes: Arc<HashFamily>) -> Result<Self> {
        let params = SketchParams::minhash(k, hashes.seed())?;
        let hasher = DartHasher::new(params.t, hashes)?;
        Ok(Self { params, hasher })
    }

    pub fn params(&self) -> SketchParams {
        self.params
    }

    pub fn hasher(&self) -> &DartHasher {
        &self.hasher
    }

    pub fn sketch(&self, x: &WeightedSet) -> Result<MinHashSketch> {
        let run = self.run(x)?;
        let values = run.darts.iter().map(|d| d.fingerprint).collect();
        Ok(MinHashSketch::new(values, self.params.seed))
    }

    pub fn run(&self, x: &WeightedSet) -> Result<MinHashRun> {
        x.require_nonempty()?;
        let k = self.params.k;
        let hashes = self.hasher.hashes();
        let mut darts = Vec::new();
        let mut best: Vec<Option<Dart>> = vec![None; k];
        let mut steps = 0u32;
        loop {
            steps += 1;
            let phi = steps as f64;
            self.hasher.darts_below_rank_into(x, phi / x.l1(), &mut darts)?;
            best.iter_mut().for_each(|b| *b = None);
            let mut filled = 0;
            for d in &darts {
                let slot = &mut best[hashes.bucket(d.fingerprint, k)];
                match slot {
                    None => {
                        *slot = Some(*d);
                        filled += 1;
                    }
                    Some(cur) if d.rank_cmp(cur).is_lt() => *cur = *d,
                    Some(_) => {}
                }
            }
            if filled == k {
                break;
            }
        }
        Ok(MinHashRun { darts: best.into_iter().map(Option::unwrap).collect(), steps })
    }
}

/// Fraction of coordinates on which the two sketches agree.
pub fn estimate_jaccard(a: &MinHashSketch, b: &MinHashSketch) -> Result<f64> {
    if a.k() != b.k() {
        return Err(Error::LengthMismatch { left: a.k(), right: b.k() });
    }
    if a.seed != b.seed {
        return Err(Error::SeedMismatch { left: a.seed, right: b.seed });
    }
    if a.k() == 0 {
        return Err(Error::invalid("empty sketches"));
    }
    let equal = a.values.iter().zip(&b.values).filter(|(x, y)| x == y).count();
    Ok(equal as f64 / a.k() as f64)
}
