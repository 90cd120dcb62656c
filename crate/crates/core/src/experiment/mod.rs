//! Synthetic-data experiments: estimation accuracy and running-time grids,
//! written as CSV.

pub mod estimation;
pub mod synth;
pub mod timing;

use std::fmt;
use std::str::FromStr;

use crate::baselines::{estimate_icws, IcwsHashValue, IcwsSketcher};
use crate::error::{Error, Result};
use crate::set::WeightedSet;
use crate::sketch::{estimate_jaccard, estimate_jaccard_bottom_k, BottomK, BottomKSketch, DartMinHash, MinHashSketch};

pub use estimation::{ci_half_width, run_estimation, write_estimation_csv, EstimationRow, ExperimentConfig};
pub use synth::{gen_pair, gen_set};
pub use timing::{format_sig3, run_timing, standard_grid, write_timing_csv, TimingCell, TimingRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    DartMinHash,
    Icws,
    IcwsFast,
    BottomK,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::DartMinHash, Algorithm::Icws, Algorithm::IcwsFast, Algorithm::BottomK];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::DartMinHash => "dartminhash",
            Algorithm::Icws => "icws",
            Algorithm::IcwsFast => "icws-fast",
            Algorithm::BottomK => "bottomk",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            Error::invalid(format!("unknown algorithm {s:?}; expected dartminhash, icws, icws-fast or bottomk"))
        })
    }
}

/// Any of the sketchers under comparison, behind one interface.
#[derive(Debug, Clone)]
pub enum Sketcher {
    DartMinHash(DartMinHash),
    Icws(IcwsSketcher),
    IcwsFast(IcwsSketcher),
    BottomK(BottomK),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnySketch {
    MinHash(MinHashSketch),
    Icws(Vec<IcwsHashValue>),
    BottomK(BottomKSketch),
}

impl Sketcher {
    pub fn new(algorithm: Algorithm, k: usize, seed: u64) -> Result<Self> {
        Ok(match algorithm {
            Algorithm::DartMinHash => Sketcher::DartMinHash(DartMinHash::new(k, seed)?),
            Algorithm::Icws => Sketcher::Icws(IcwsSketcher::new(k, seed)?),
            Algorithm::IcwsFast => Sketcher::IcwsFast(IcwsSketcher::new(k, seed)?),
            Algorithm::BottomK => Sketcher::BottomK(BottomK::new(k, seed)?),
        })
    }

    pub fn sketch(&self, x: &WeightedSet) -> Result<AnySketch> {
        Ok(match self {
            Sketcher::DartMinHash(s) => AnySketch::MinHash(s.sketch(x)?),
            Sketcher::Icws(s) => AnySketch::Icws(s.sketch(x)?),
            Sketcher::IcwsFast(s) => AnySketch::Icws(s.sketch_fast(x)?),
            Sketcher::BottomK(s) => AnySketch::BottomK(s.sketch(x)?),
        })
    }

    pub fn estimate(&self, x: &WeightedSet, y: &WeightedSet) -> Result<f64> {
        estimate(&self.sketch(x)?, &self.sketch(y)?)
    }
}

/// Jaccard estimate from two sketches of the same kind.
pub fn estimate(a: &AnySketch, b: &AnySketch) -> Result<f64> {
    match (a, b) {
        (AnySketch::MinHash(a), AnySketch::MinHash(b)) => estimate_jaccard(a, b),
        (AnySketch::Icws(a), AnySketch::Icws(b)) => estimate_icws(a, b),
        (AnySketch::BottomK(a), AnySketch::BottomK(b)) => estimate_jaccard_bottom_k(a, b),
        _ => Err(Error::invalid("sketches of different kinds")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("bagminhash".parse::<Algorithm>().is_err());
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let x = WeightedSet::new([(1, 1.0)]).unwrap();
        let a = Sketcher::new(Algorithm::DartMinHash, 4, 0).unwrap().sketch(&x).unwrap();
        let b = Sketcher::new(Algorithm::Icws, 4, 0).unwrap().sketch(&x).unwrap();
        assert!(estimate(&a, &b).is_err());
    }
}
