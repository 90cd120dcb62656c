//! Straight-line DartHash used as the correctness oracle for
//! [`DartHasher`](crate::darthash::DartHasher).
//!
//! Powers of two are recomputed on every use, loop bounds come directly from
//! `floor(log2(..))`, and every random draw goes through the full 22-byte key
//! of [`HashFamily`] instead of the staged prefix hashers.

use crate::darthash::{check_phi, Dart};
use crate::error::{Error, Result};
use crate::hashing::{DartIndex, HashFamily, Stream};
use crate::set::WeightedSet;

pub fn naive_darts(hashes: &HashFamily, t: u64, x: &WeightedSet, phi: f64) -> Result<Vec<Dart>> {
    check_phi(phi)?;
    x.require_nonempty()?;
    naive_darts_below_rank(hashes, t, x, phi / x.l1())
}

pub fn naive_darts_below_rank(hashes: &HashFamily, t: u64, x: &WeightedSet, limit: f64) -> Result<Vec<Dart>> {
    x.require_nonempty()?;
    if t == 0 || limit.is_nan() || limit <= 0.0 {
        return Err(Error::invalid("t and the rank limit must be positive"));
    }
    let t = t as f64;
    let mut out = Vec::new();
    for (i, x_i) in x.iter() {
        let nu_max = (1.0 + t * x_i).log2().floor() as i64;
        let rho_max = (1.0 + limit).log2().floor() as i64;
        if nu_max > 254 || rho_max > 254 {
            return Err(Error::OutOfRange("too many regions".into()));
        }
        for nu in 0..=nu_max {
            for rho in 0..=rho_max {
                let big_w = (2f64.powi(nu as i32) - 1.0) / t;
                let big_r = 2f64.powi(rho as i32) - 1.0;
                let d_nu = 2f64.powi(nu as i32) / (t * 2f64.powi(rho as i32));
                let d_rho = 2f64.powi(rho as i32) / 2f64.powi(nu as i32);
                let mut w: u64 = 0;
                while (w as f64) <= 2f64.powi(rho as i32) - 1.0 {
                    if x_i < big_w + w as f64 * d_nu {
                        break;
                    }
                    let mut r: u64 = 0;
                    while (r as f64) <= 2f64.powi(nu as i32) - 1.0 {
                        if limit < big_r + r as f64 * d_rho {
                            break;
                        }
                        let area =
                            DartIndex { element: i, nu: nu as u8, rho: rho as u8, w: w as u32, r: r as u32, j: 0 };
                        let count = hashes.poisson1(&area);
                        let mut j = 0;
                        while j < count {
                            let index = DartIndex { j: j as u16, ..area };
                            let v = hashes.uniform(&index, Stream::Weight);
                            let u = hashes.uniform(&index, Stream::Rank);
                            let weight = big_w + (w as f64 + v) * d_nu;
                            let rank = big_r + (r as f64 + u) * d_rho;
                            if weight <= x_i && rank <= limit {
                                out.push(Dart { index, weight, rank, fingerprint: hashes.fingerprint(&index) });
                            }
                            j += 1;
                        }
                        r += 1;
                    }
                    w += 1;
                }
            }
        }
    }
    Ok(out)
}
