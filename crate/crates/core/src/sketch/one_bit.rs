use crate::error::{Error, Result};
use crate::sketch::MinHashSketch;

/// One bit per minhash, packed 64 to a word. Two bits collide with
/// probability `(1 + J) / 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneBitSketch {
    words: Vec<u64>,
    k: usize,
    seed: u64,
}

impl OneBitSketch {
    pub(crate) fn from_words(words: Vec<u64>, k: usize, seed: u64) -> Self {
        debug_assert_eq!(words.len(), k.div_ceil(64));
        Self { words, k, seed }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn bit(&self, j: usize) -> bool {
        assert!(j < self.k, "bit {j} out of range for k = {}", self.k);
        (self.words[j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.k).map(|j| self.bit(j))
    }
}

/// Keeps the lowest bit of every minhash value.
pub fn one_bit(s: &MinHashSketch) -> OneBitSketch {
    let mut words = vec![0u64; s.k().div_ceil(64)];
    for (j, v) in s.values().iter().enumerate() {
        words[j / 64] |= (v & 1) << (j % 64);
    }
    OneBitSketch::from_words(words, s.k(), s.seed())
}

/// Fraction of agreeing bits.
pub fn bit_agreement(a: &OneBitSketch, b: &OneBitSketch) -> Result<f64> {
    if a.k != b.k {
        return Err(Error::LengthMismatch { left: a.k, right: b.k });
    }
    if a.seed != b.seed {
        return Err(Error::SeedMismatch { left: a.seed, right: b.seed });
    }
    if a.k == 0 {
        return Err(Error::invalid("empty sketches"));
    }
    // Padding bits are zero in both, so they never count as disagreements.
    let differing: u32 = a.words.iter().zip(&b.words).map(|(x, y)| (x ^ y).count_ones()).sum();
    Ok(1.0 - differing as f64 / a.k as f64)
}

/// Unclamped estimate `2 * agreement - 1`; may be negative.
pub fn estimate_jaccard_1bit_raw(a: &OneBitSketch, b: &OneBitSketch) -> Result<f64> {
    Ok(2.0 * bit_agreement(a, b)? - 1.0)
}

/// `2 * agreement - 1` clamped to `[0, 1]`.
pub fn estimate_jaccard_1bit(a: &OneBitSketch, b: &OneBitSketch) -> Result<f64> {
    Ok(estimate_jaccard_1bit_raw(a, b)?.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::synth::{gen_pair, gen_set};
    use crate::sketch::DartMinHash;
    use crate::testutil::rng;

    #[test]
    fn packs_lowest_bits() {
        let s = MinHashSketch::new((0..130u64).collect(), 4);
        let b = one_bit(&s);
        assert_eq!(b.k(), 130);
        assert_eq!(b.words().len(), 3);
        for j in 0..130 {
            assert_eq!(b.bit(j), j % 2 == 1);
        }
        assert_eq!(estimate_jaccard_1bit(&b, &b).unwrap(), 1.0);
        let other = one_bit(&MinHashSketch::new(vec![0; 130], 4));
        assert_eq!(bit_agreement(&b, &other).unwrap(), 0.5);
        let short = one_bit(&MinHashSketch::new(vec![0; 10], 4));
        assert!(matches!(bit_agreement(&b, &short), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn clamps_negative_estimates() {
        let a = one_bit(&MinHashSketch::new(vec![0; 8], 0));
        let b = one_bit(&MinHashSketch::new(vec![1; 8], 0));
        assert_eq!(estimate_jaccard_1bit_raw(&a, &b).unwrap(), -1.0);
        assert_eq!(estimate_jaccard_1bit(&a, &b).unwrap(), 0.0);
    }

    fn agreement_at(j: f64, k: usize, seed: u64) -> (f64, f64) {
        let mut g = rng(seed);
        let m = DartMinHash::new(k, seed).unwrap();
        let x = gen_set(200, 1.0, &mut g);
        let y = if j == 0.0 { gen_set(200, 1.0, &mut g) } else { gen_pair(&x, j, &mut g).unwrap() };
        let a = one_bit(&m.sketch(&x).unwrap());
        let b = one_bit(&m.sketch(&y).unwrap());
        (bit_agreement(&a, &b).unwrap(), estimate_jaccard_1bit_raw(&a, &b).unwrap())
    }

    #[test]
    fn independent_sets_agree_half_the_time() {
        let (agree, est) = agreement_at(0.0, 10_000, 31);
        assert!((agree - 0.5).abs() < 0.01, "agreement {agree}");
        let (_, est_small) = agreement_at(0.0, 1024, 32);
        assert!(est.abs() < 0.03);
        assert!(est_small.abs() < 0.06, "estimate {est_small}");
    }

    #[test]
    fn half_similar_sets_agree_three_quarters() {
        let (agree, _) = agreement_at(0.5, 10_000, 33);
        assert!((agree - 0.75).abs() < 0.015, "agreement {agree}");
        let (_, est) = agreement_at(0.5, 4096, 34);
        assert!((est - 0.5).abs() < 0.041, "estimate {est}");
    }
}
