#![allow(dead_code)]

use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete, Poisson};

/// Pearson chi-square p-value; adjacent categories are merged until each
/// expected count reaches 5.
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
            (o, e) = (0.0, 0.0);
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += o;
        last.1 += e;
    }
    assert!(bins.len() >= 2, "not enough mass for a chi-square test");
    let stat: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    1.0 - ChiSquared::new((bins.len() - 1) as f64).unwrap().cdf(stat)
}

/// Poisson pmf on `0..max` with the upper tail folded into the last entry.
pub fn poisson_probs(lambda: f64, max: usize) -> Vec<f64> {
    let d = Poisson::new(lambda).unwrap();
    let mut p: Vec<f64> = (0..max as u64).map(|k| d.pmf(k)).collect();
    p.push((1.0 - p.iter().sum::<f64>()).max(0.0));
    p
}

pub fn binomial_probs(n: u64, q: f64) -> Vec<f64> {
    let d = Binomial::new(q, n).unwrap();
    (0..=n).map(|k| d.pmf(k)).collect()
}

pub fn histogram(values: impl IntoIterator<Item = usize>, bins: usize) -> Vec<u64> {
    let mut h = vec![0u64; bins];
    for v in values {
        h[v.min(bins - 1)] += 1;
    }
    h
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Unbiased sample variance.
pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64
}
