//! Sparse nonnegative weighted sets and exact weighted Jaccard similarity.
//!
//! A [`WeightedSet`] is a list of `(id, weight)` pairs with strictly positive
//! weights and unique ids. Zero weights are dropped at construction, so the
//! number of entries is always the L0 norm.
//!
//! The text format used by the command line is one set per line, with
//! space-separated `id:weight` tokens:
//!
//! ```text
//! 7:0.5 9:0.5
//! 12:1.25
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Element identifier. The universe is all 64-bit integers.
pub type ElementId = u64;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSet {
    entries: Vec<(ElementId, f64)>,
    l1: f64,
}

impl WeightedSet {
    /// Builds a set from `(id, weight)` pairs, keeping insertion order.
    ///
    /// Zero weights are stripped. Negative or non-finite weights and repeated
    /// ids are rejected. The result may be empty.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ElementId, f64)>,
    {
        let pairs = pairs.into_iter();
        let mut entries = Vec::with_capacity(pairs.size_hint().0);
        let mut seen = HashSet::with_capacity(pairs.size_hint().0);
        for (id, weight) in pairs {
            if weight.is_nan() || weight.is_infinite() {
                return Err(Error::NonFiniteWeight { id, weight });
            }
            if weight < 0.0 {
                return Err(Error::NegativeWeight { id, weight });
            }
            if !seen.insert(id) {
                return Err(Error::DuplicateId(id));
            }
            if weight > 0.0 {
                entries.push((id, weight));
            }
        }
        let l1 = sum_weights(&entries);
        Ok(Self { entries, l1 })
    }

    pub fn empty() -> Self {
        Self { entries: Vec::new(), l1: 0.0 }
    }

    #[inline]
    pub fn entries(&self) -> &[(ElementId, f64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementId, f64)> + '_ {
        self.entries.iter().copied()
    }

    /// Number of nonzero entries.
    #[inline]
    pub fn l0(&self) -> usize {
        self.entries.len()
    }

    /// Sum of weights.
    #[inline]
    pub fn l1(&self) -> f64 {
        self.l1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self, id: ElementId) -> Option<f64> {
        self.entries.iter().find(|(i, _)| *i == id).map(|&(_, w)| w)
    }

    /// Multiplies every weight by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::invalid(format!("scale factor must be positive, got {factor}")));
        }
        Self::new(self.iter().map(|(id, w)| (id, w * factor)))
    }

    /// Returns an error unless the set has at least one entry.
    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() || self.l1 <= 0.0 {
            Err(Error::EmptySet)
        } else {
            Ok(())
        }
    }

    /// Parses one line of the `id:weight` text format.
    pub fn parse_line(line: &str) -> std::result::Result<Self, String> {
        let mut pairs = Vec::new();
        for token in line.split_whitespace() {
            let (id, weight) = token.split_once(':').ok_or_else(|| format!("expected `id:weight`, got `{token}`"))?;
            let id: u64 = id.parse().map_err(|e| format!("bad id `{id}`: {e}"))?;
            let weight: f64 = weight.parse().map_err(|e| format!("bad weight `{weight}`: {e}"))?;
            pairs.push((id, weight));
        }
        Self::new(pairs).map_err(|e| e.to_string())
    }

    /// Formats the set as one line of the text format, without a newline.
    ///
    /// Weights are written with Rust's shortest round-trip representation, so
    /// `parse_line(&s.to_line())` reproduces the set exactly.
    pub fn to_line(&self) -> String {
        let mut out = String::with_capacity(self.entries.len() * 24);
        for (n, (id, w)) in self.entries.iter().enumerate() {
            if n > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{id}:{w:?}");
        }
        out
    }
}

fn sum_weights(entries: &[(ElementId, f64)]) -> f64 {
    entries.iter().map(|&(_, w)| w).sum()
}

/// Parses a whole document in the text format. Blank lines and lines starting
/// with `#` are skipped.
pub fn parse_sets(text: &str) -> Result<Vec<WeightedSet>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .map(|(n, l)| WeightedSet::parse_line(l).map_err(|message| Error::Parse { line: n + 1, message }))
        .collect()
}

pub fn format_sets<'a>(sets: impl IntoIterator<Item = &'a WeightedSet>) -> String {
    let mut out = String::new();
    for s in sets {
        out.push_str(&s.to_line());
        out.push('\n');
    }
    out
}

/// Exact weighted Jaccard similarity `sum(min) / sum(max)` over the union of ids.
///
/// Sums run in id order, which makes the result bitwise symmetric in its
/// arguments.
pub fn exact_jaccard(x: &WeightedSet, y: &WeightedSet) -> Result<f64> {
    if x.is_empty() && y.is_empty() {
        return Err(Error::BothEmpty);
    }
    let mut union: BTreeMap<ElementId, (f64, f64)> = BTreeMap::new();
    for (id, w) in x.iter() {
        union.entry(id).or_default().0 = w;
    }
    for (id, w) in y.iter() {
        union.entry(id).or_default().1 = w;
    }
    let (mut min_sum, mut max_sum) = (0.0, 0.0);
    for (a, b) in union.into_values() {
        min_sum += a.min(b);
        max_sum += a.max(b);
    }
    Ok(min_sum / max_sum)
}
