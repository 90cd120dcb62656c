//! Sketches built from DartHash darts and their similarity estimators.
//!
//! - [`DartMinHash`]: `k` independent weighted minhashes. Coordinate `j` of
//!   two sketches collides with probability equal to the weighted Jaccard
//!   similarity, independently across coordinates.
//! - [`BottomK`]: the `k` lowest-rank darts hitting a set.
//! - [`one_bit`]: 1-bit compression of a minhash sketch.

pub mod bottom_k;
pub mod codec;
pub mod minhash;
pub mod one_bit;

pub use bottom_k::{estimate_jaccard_bottom_k, BottomK, BottomKSketch};
pub use minhash::{estimate_jaccard, minhash_density, DartMinHash, MinHashRun, MinHashSketch, SketchParams};
pub use one_bit::{bit_agreement, estimate_jaccard_1bit, estimate_jaccard_1bit_raw, one_bit, OneBitSketch};
