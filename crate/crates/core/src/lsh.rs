//! (L, K) locality-sensitive hashing for weighted Jaccard similarity.
//!
//! Points are split into weight classes `|x|_1 in [2^c, 2^(c+1))` and scaled
//! by `2^-c` so every stored point has `|x|_1 in [1, 2)`. DartHash runs with
//! `t = L * K`, its darts are hashed into `L` buckets, and the `K` lowest-rank
//! darts of each bucket form that table's key. Two points of one class share
//! the key of a table with probability `J^K`, independently across tables.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::darthash::{Dart, DartHasher};
use crate::error::{Error, Result};
use crate::hashing::{mix64, HashFamily};
use crate::set::{exact_jaccard, WeightedSet};

pub type PointId = u64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LshParams {
    /// Number of tables `L`.
    pub tables: usize,
    /// Hash values per table `K`.
    pub hashes_per_table: usize,
    /// Similarity threshold used to choose the weight classes to probe.
    pub j1: f64,
}

impl LshParams {
    pub fn new(tables: usize, hashes_per_table: usize) -> Result<Self> {
        Self::with_threshold(tables, hashes_per_table, 0.5)
    }

    pub fn with_threshold(tables: usize, hashes_per_table: usize, j1: f64) -> Result<Self> {
        if tables == 0 || hashes_per_table == 0 {
            return Err(Error::invalid("L and K must be at least 1"));
        }
        if !(j1 > 0.0 && j1 <= 1.0) {
            return Err(Error::invalid(format!("j1 must be in (0, 1], got {j1}")));
        }
        Ok(Self { tables, hashes_per_table, j1 })
    }

    pub fn density(&self) -> u64 {
        (self.tables * self.hashes_per_table) as u64
    }
}

/// Fingerprints of the `K` lowest-rank darts of one bucket, ascending by rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LshKey(pub Vec<u64>);

impl LshKey {
    /// Order-sensitive 64-bit digest used as the table cell.
    pub fn cell(&self) -> u64 {
        let mut h = self.0.len() as u64;
        for &fp in &self.0 {
            h = mix64(h.rotate_left(23) ^ fp).wrapping_add(0x9e37_79b9_7f4a_7c15);
        }
        mix64(h)
    }
}

/// Computes the `L` table keys of a set.
#[derive(Debug, Clone)]
pub struct LshHasher {
    params: LshParams,
    hasher: DartHasher,
}

impl LshHasher {
    pub fn new(params: LshParams, hashes: Arc<HashFamily>) -> Result<Self> {
        let hasher = DartHasher::new(params.density(), hashes)?;
        Ok(Self { params, hasher })
    }

    pub fn params(&self) -> LshParams {
        self.params
    }

    /// Keys for `x` as given; callers normalize to a weight class first.
    pub fn keys(&self, x: &WeightedSet) -> Result<Vec<LshKey>> {
        x.require_nonempty()?;
        let (l, k) = (self.params.tables, self.params.hashes_per_table);
        let hashes = self.hasher.hashes();
        let mut darts = Vec::new();
        let mut buckets: Vec<Vec<Dart>> = vec![Vec::new(); l];
        let mut phi = 0.0;
        loop {
            phi += 1.0;
            self.hasher.darts_below_rank_into(x, phi / x.l1(), &mut darts)?;
            buckets.iter_mut().for_each(Vec::clear);
            for d in &darts {
                buckets[hashes.bucket(d.fingerprint, l)].push(*d);
            }
            if buckets.iter().all(|b| b.len() >= k) {
                break;
            }
        }
        Ok(buckets
            .into_iter()
            .map(|mut b| {
                if b.len() > k {
                    b.select_nth_unstable_by(k - 1, Dart::rank_cmp);
                    b.truncate(k);
                }
                b.sort_unstable_by(Dart::rank_cmp);
                LshKey(b.iter().map(|d| d.fingerprint).collect())
            })
            .collect())
    }
}

/// `floor(log2(v))` for positive normal `v`, exact at powers of two.
pub fn weight_class(v: f64) -> Result<i32> {
    if !(v.is_finite() && v > 0.0) || !v.is_normal() {
        return Err(Error::OutOfRange(format!("norm {v} has no weight class")));
    }
    let exp = ((v.to_bits() >> 52) & 0x7ff) as i32;
    Ok(exp - 1023)
}

/// Scales `x` into `[1, 2)` and returns its class exponent.
pub fn normalize(x: &WeightedSet) -> Result<(i32, WeightedSet)> {
    x.require_nonempty()?;
    let c = weight_class(x.l1())?;
    Ok((c, scale_to_class(x, c)?))
}

fn scale_to_class(x: &WeightedSet, c: i32) -> Result<WeightedSet> {
    let factor = (-c as f64).exp2();
    if !factor.is_normal() {
        return Err(Error::OutOfRange(format!("class {c} cannot be normalized")));
    }
    x.scaled(factor)
}

/// Classes whose range `[2^c, 2^(c+1))` meets `[j1 |q|_1, |q|_1 / j1)`.
///
/// A point `x` can only reach `J(q, x) >= j1` when
/// `|x|_1 / |q|_1 in [j1, 1/j1]`; the upper end is treated as open.
pub fn probed_classes(norm: f64, j1: f64) -> Result<RangeInclusive<i32>> {
    let lo = j1 * norm;
    let hi = norm / j1;
    let first = weight_class(lo)?;
    let mut last = weight_class(hi)?;
    if hi == (last as f64).exp2() && last > first {
        last -= 1;
    }
    Ok(first..=last)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub id: PointId,
    pub similarity: f64,
}

#[derive(Debug, Default)]
struct WeightClass {
    tables: Vec<HashMap<u64, Vec<PointId>>>,
    #[cfg(debug_assertions)]
    tuples: Vec<HashMap<u64, LshKey>>,
}

impl WeightClass {
    fn new(l: usize) -> Self {
        WeightClass {
            tables: vec![HashMap::new(); l],
            #[cfg(debug_assertions)]
            tuples: vec![HashMap::new(); l],
        }
    }

    fn insert(&mut self, id: PointId, keys: Vec<LshKey>) {
        for (table, key) in keys.into_iter().enumerate() {
            let cell = key.cell();
            #[cfg(debug_assertions)]
            {
                let stored = self.tuples[table].entry(cell).or_insert_with(|| key.clone());
                debug_assert_eq!(*stored, key, "64-bit cell collision between distinct keys");
            }
            self.tables[table].entry(cell).or_default().push(id);
        }
    }

    fn lookup<'a>(&'a self, keys: &'a [LshKey]) -> impl Iterator<Item = PointId> + 'a {
        keys.iter().enumerate().flat_map(move |(table, key)| {
            let cell = key.cell();
            #[cfg(debug_assertions)]
            if let Some(stored) = self.tuples[table].get(&cell) {
                debug_assert_eq!(stored, key, "64-bit cell collision between distinct keys");
            }
            self.tables[table].get(&cell).into_iter().flatten().copied()
        })
    }
}

/// Weighted-Jaccard near neighbor index.
///
/// Inserts need `&mut self`; queries only read and may run concurrently.
#[derive(Debug)]
pub struct LshIndex {
    keyer: LshHasher,
    classes: BTreeMap<i32, WeightClass>,
    points: HashMap<PointId, (i32, WeightedSet)>,
}

impl LshIndex {
    pub fn new(params: LshParams, seed: u64) -> Result<Self> {
        Self::with_hashes(params, Arc::new(HashFamily::new(seed)))
    }

    pub fn with_hashes(params: LshParams, hashes: Arc<HashFamily>) -> Result<Self> {
        Ok(Self { keyer: LshHasher::new(params, hashes)?, classes: BTreeMap::new(), points: HashMap::new() })
    }

    pub fn params(&self) -> LshParams {
        self.keyer.params
    }

    pub fn keyer(&self) -> &LshHasher {
        &self.keyer
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, id: PointId) -> Option<&WeightedSet> {
        self.points.get(&id).map(|(_, x)| x)
    }

    pub fn class_of(&self, id: PointId) -> Option<i32> {
        self.points.get(&id).map(|&(c, _)| c)
    }

    /// Number of stored ids in class `c`, counted once per table.
    pub fn cell_entries(&self, c: i32) -> usize {
        self.classes.get(&c).map_or(0, |wc| wc.tables.iter().flat_map(|t| t.values()).map(Vec::len).sum())
    }

    pub fn insert(&mut self, id: PointId, x: WeightedSet) -> Result<()> {
        if self.points.contains_key(&id) {
            return Err(Error::DuplicatePoint(id));
        }
        let (c, normalized) = normalize(&x)?;
        let keys = self.keyer.keys(&normalized)?;
        let l = self.keyer.params.tables;
        self.classes.entry(c).or_insert_with(|| WeightClass::new(l)).insert(id, keys);
        self.points.insert(id, (c, x));
        Ok(())
    }

    /// Candidates colliding with `q` in at least one table of a probed class,
    /// scored by exact similarity and sorted best first.
    pub fn query(&self, q: &WeightedSet) -> Result<Vec<Candidate>> {
        q.require_nonempty()?;
        let mut seen = HashSet::new();
        for c in probed_classes(q.l1(), self.keyer.params.j1)? {
            let Some(class) = self.classes.get(&c) else { continue };
            let keys = self.keyer.keys(&scale_to_class(q, c)?)?;
            seen.extend(class.lookup(&keys));
        }
        let mut out = seen
            .into_iter()
            .map(|id| {
                let similarity = exact_jaccard(q, &self.points[&id].1)?;
                Ok(Candidate { id, similarity })
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort_by(|a, b| b.similarity.total_cmp(&a.similarity).then(a.id.cmp(&b.id)));
        Ok(out)
    }
}
