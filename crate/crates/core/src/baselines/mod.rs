//! Reference algorithms: ICWS for comparison and a literal DartHash oracle.

pub mod icws;
pub mod naive;

pub use icws::{estimate_icws, IcwsHashValue, IcwsSketcher};
pub use naive::{naive_darts, naive_darts_below_rank};
