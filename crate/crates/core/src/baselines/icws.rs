//! Improved consistent weighted sampling (Ioffe, 2010).
//!
//! For every hash coordinate `j` and element `i` draw `r, c ~ Gamma(2, 1)` and
//! `beta ~ Uniform(0, 1)`, then
//!
//! ```text
//! t_i = floor(ln(x_i) / r_i + beta_i)
//! y_i = exp(r_i (t_i - beta_i))
//! a_i = c_i / (y_i exp(r_i))
//! ```
//!
//! and output `(argmin a_i, t_argmin)`. All draws are keyed by
//! `(element, coordinate, stream)` so the sample of a set never depends on
//! anything else that was sketched.

use crate::error::{Error, Result};
use crate::hashing::{to_unit, AreaHasher, DartIndex, HashFamily, Stream};
use crate::set::WeightedSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IcwsHashValue {
    pub element: u64,
    /// Quantized log-weight level `t`.
    pub tick: i64,
}

#[derive(Debug, Clone)]
pub struct IcwsSketcher {
    k: usize,
    hashes: HashFamily,
}

struct Draws {
    r: f64,
    c: f64,
    beta: f64,
}

/// Standard exponential from a uniform in `[0, 1)`.
#[inline(always)]
fn exp1(u: f64) -> f64 {
    -(1.0 - u).ln()
}

#[inline(always)]
fn draws_from(h: impl Fn(Stream) -> u64) -> Draws {
    let r = exp1(to_unit(h(Stream::IcwsR1))) + exp1(to_unit(h(Stream::IcwsR2)));
    let c = exp1(to_unit(h(Stream::IcwsC1))) + exp1(to_unit(h(Stream::IcwsC2)));
    let beta = to_unit(h(Stream::IcwsBeta));
    Draws { r, c, beta }
}

/// Returns `(a, t)` for one element at one coordinate.
#[inline(always)]
fn sample(ln_x: f64, d: &Draws) -> (f64, i64) {
    let t = (ln_x / d.r + d.beta).floor();
    let y = (d.r * (t - d.beta)).exp();
    let a = d.c / (y * d.r.exp());
    (a, t as i64)
}

impl IcwsSketcher {
    pub fn new(k: usize, seed: u64) -> Result<Self> {
        if k == 0 || k > u32::MAX as usize {
            return Err(Error::invalid(format!("sketch length k must be in [1, 2^32), got {k}")));
        }
        Ok(Self { k, hashes: HashFamily::new(seed) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.hashes.seed()
    }

    fn key(element: u64, coordinate: usize) -> DartIndex {
        DartIndex { element, w: coordinate as u32, ..Default::default() }
    }

    /// Direct transcription: coordinate-major, every draw hashed from its
    /// full key and `ln(x_i)` recomputed for each coordinate.
    pub fn sketch(&self, x: &WeightedSet) -> Result<Vec<IcwsHashValue>> {
        x.require_nonempty()?;
        let mut out = Vec::with_capacity(self.k);
        for j in 0..self.k {
            let mut best_a = f64::INFINITY;
            let mut best = IcwsHashValue { element: 0, tick: 0 };
            for (i, x_i) in x.iter() {
                let key = Self::key(i, j);
                let d = draws_from(|s| self.hashes.hash(&key, s));
                let (a, t) = sample(x_i.ln(), &d);
                if a < best_a {
                    best_a = a;
                    best = IcwsHashValue { element: i, tick: t };
                }
            }
            out.push(best);
        }
        Ok(out)
    }

    /// Element-major variant computing `ln(x_i)` and the element key prefix
    /// once per element. Produces exactly the output of [`sketch`](Self::sketch).
    pub fn sketch_fast(&self, x: &WeightedSet) -> Result<Vec<IcwsHashValue>> {
        x.require_nonempty()?;
        let mut best_a = vec![f64::INFINITY; self.k];
        let mut best = vec![IcwsHashValue { element: 0, tick: 0 }; self.k];
        for (i, x_i) in x.iter() {
            let ln_x = x_i.ln();
            let eh = self.hashes.element(i);
            for j in 0..self.k {
                let area: AreaHasher<'_> = eh.area(0, 0, j as u32, 0);
                let d = draws_from(|s| area.hash(0, s));
                let (a, t) = sample(ln_x, &d);
                if a < best_a[j] {
                    best_a[j] = a;
                    best[j] = IcwsHashValue { element: i, tick: t };
                }
            }
        }
        Ok(best)
    }
}

/// Fraction of coordinates where the two samples agree.
pub fn estimate_icws(a: &[IcwsHashValue], b: &[IcwsHashValue]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    if a.is_empty() {
        return Err(Error::invalid("empty ICWS sketches"));
    }
    let equal = a.iter().zip(b).filter(|(x, y)| x == y).count();
    Ok(equal as f64 / a.len() as f64)
}
