//! Weighted minwise hashing with DartHash.
//!
//! A weighted set `x` maps element ids to non-negative weights. DartHash
//! throws a deterministic Poisson process of darts over
//! `ids x [0, inf) x [0, inf)` and reports the darts with `weight <= x_i` and
//! `rank <= theta`. Everything else in this crate is built on that sequence:
//!
//! - [`DartMinHash`] turns it into `k` independent minhashes in
//!   `O(k log k + |x|_0)` expected time.
//! - [`BottomK`] keeps the `k` lowest-rank darts.
//! - [`LshIndex`] is an (L, K) near-neighbor index for weighted Jaccard.
//!
//! ```
//! use dartminhash::{estimate_jaccard, exact_jaccard, DartMinHash, WeightedSet};
//!
//! let x = WeightedSet::new([(1, 0.5), (2, 1.0), (3, 0.25)]).unwrap();
//! let y = WeightedSet::new([(1, 0.5), (2, 0.5), (4, 0.25)]).unwrap();
//! let mh = DartMinHash::new(512, 42).unwrap();
//! let est = estimate_jaccard(&mh.sketch(&x).unwrap(), &mh.sketch(&y).unwrap()).unwrap();
//! let exact = exact_jaccard(&x, &y).unwrap();
//! assert!((est - exact).abs() < 0.15);
//! ```

pub mod baselines;
pub mod darthash;
pub mod error;
pub mod experiment;
pub mod hashing;
pub mod lsh;
pub mod set;
pub mod sketch;

#[cfg(test)]
mod testutil;

pub use baselines::{estimate_icws, IcwsHashValue, IcwsSketcher};
pub use darthash::{Dart, DartHasher, Region};
pub use error::{Error, Result};
pub use hashing::{DartIndex, HashFamily, Stream};
pub use lsh::{Candidate, LshHasher, LshIndex, LshKey, LshParams, PointId};
pub use set::{exact_jaccard, format_sets, parse_sets, ElementId, WeightedSet};
pub use sketch::{
    bit_agreement, estimate_jaccard, estimate_jaccard_1bit, estimate_jaccard_1bit_raw, estimate_jaccard_bottom_k,
    minhash_density, one_bit, BottomK, BottomKSketch, DartMinHash, MinHashSketch, OneBitSketch, SketchParams,
};
