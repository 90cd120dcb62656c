//! Statistics helpers for unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::set::WeightedSet;

/// Pearson chi-square goodness-of-fit p-value. Adjacent categories are merged
/// until every expected count is at least 5.
pub fn chi_square_p(observed: &[u64], probs: &[f64]) -> f64 {
    assert_eq!(observed.len(), probs.len());
    let n: u64 = observed.iter().sum();
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&obs, &p) in observed.iter().zip(probs) {
        o += obs as f64;
        e += p * n as f64;
        if e >= 5.0 {
            bins.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => bins.push((o, e)),
        }
    }
    assert!(bins.len() >= 2, "not enough mass for a chi-square test");
    let stat: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dist = ChiSquared::new((bins.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random set with `l0` distinct ids below `universe` and weights in `[lo, hi)`.
pub fn random_set(rng: &mut impl Rng, l0: usize, universe: u64, lo: f64, hi: f64) -> WeightedSet {
    let mut ids = std::collections::BTreeSet::new();
    while ids.len() < l0 {
        ids.insert(rng.random_range(0..universe));
    }
    WeightedSet::new(ids.into_iter().map(|id| (id, rng.random_range(lo..hi)))).unwrap()
}

/// Poisson(lambda) probabilities for `0..max` with the upper tail folded into
/// the last entry.
pub fn poisson_probs(lambda: f64, max: usize) -> Vec<f64> {
    use statrs::distribution::{Discrete, Poisson};
    let d = Poisson::new(lambda).unwrap();
    let mut p: Vec<f64> = (0..max as u64).map(|k| d.pmf(k)).collect();
    p.push((1.0 - p.iter().sum::<f64>()).max(0.0));
    p
}

pub fn binomial_probs(n: u64, q: f64) -> Vec<f64> {
    use statrs::distribution::{Binomial, Discrete};
    let d = Binomial::new(q, n).unwrap();
    (0..=n).map(|k| d.pmf(k)).collect()
}
