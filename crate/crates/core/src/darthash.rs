//! Recovery of the first darts hitting a weighted set.
//!
//! Conceptually darts are thrown uniformly into weight-rank space for every
//! element, at density `t` per unit area. A dart at `(weight, rank)` on
//! element `i` hits `x` when `weight <= x_i`. Ranks are normalized so that
//! an expected `phi * t` darts of rank at most `phi / |x|_1` hit `x`.
//!
//! The weight-rank plane of each element is cut into dyadic regions
//! `(nu, rho)` covering
//! `[(2^nu - 1)/t, (2^(nu+1) - 1)/t) x [2^rho - 1, 2^(rho+1) - 1)`.
//! Region `(nu, rho)` holds `2^(nu + rho)` areas of measure `1/t`
//! (`2^rho` columns along the weight axis and `2^nu` rows along the rank
//! axis), and each area holds a Poisson(1) number of darts whose count and
//! positions are pure functions of the area index. Only areas that can
//! contain hitting darts below the rank limit are visited.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hashing::{DartIndex, HashFamily, Stream};
use crate::set::WeightedSet;

/// Largest region exponent along either axis.
pub const MAX_REGION_EXP: usize = 254;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dart {
    pub index: DartIndex,
    /// Position on the weight axis.
    pub weight: f64,
    /// Normalized rank.
    pub rank: f64,
    pub fingerprint: u64,
}

impl Dart {
    #[inline]
    pub fn element(&self) -> u64 {
        self.index.element
    }

    /// Orders by rank, breaking exact ties by index tuple.
    #[inline]
    pub fn rank_cmp(&self, other: &Dart) -> Ordering {
        self.rank.total_cmp(&other.rank).then_with(|| self.index.cmp(&other.index))
    }
}

/// Geometry of region `(nu, rho)` for density `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub nu: u8,
    pub rho: u8,
    /// Lower weight boundary `(2^nu - 1)/t`.
    pub weight_start: f64,
    /// Lower rank boundary `2^rho - 1`.
    pub rank_start: f64,
    /// Width of one area along the weight axis, `2^nu / (t 2^rho)`.
    pub weight_step: f64,
    /// Height of one area along the rank axis, `2^rho / 2^nu`.
    pub rank_step: f64,
}

impl Region {
    pub fn new(nu: u8, rho: u8, t: u64) -> Self {
        let p_nu = (nu as f64).exp2();
        let p_rho = (rho as f64).exp2();
        Self::from_powers(nu, rho, p_nu, p_rho, t as f64)
    }

    #[inline(always)]
    fn from_powers(nu: u8, rho: u8, p_nu: f64, p_rho: f64, t: f64) -> Self {
        Region {
            nu,
            rho,
            weight_start: (p_nu - 1.0) / t,
            rank_start: p_rho - 1.0,
            weight_step: p_nu / (t * p_rho),
            rank_step: p_rho / p_nu,
        }
    }

    /// Number of areas along the weight axis, `2^rho`.
    pub fn weight_cells(&self) -> f64 {
        (self.rho as f64).exp2()
    }

    /// Number of areas along the rank axis, `2^nu`.
    pub fn rank_cells(&self) -> f64 {
        (self.nu as f64).exp2()
    }

    pub fn weight_range(&self) -> (f64, f64) {
        (self.weight_start, self.weight_start + self.weight_step * self.weight_cells())
    }

    pub fn rank_range(&self) -> (f64, f64) {
        (self.rank_start, self.rank_start + self.rank_step * self.rank_cells())
    }
}

/// DartHash with a fixed density `t`.
#[derive(Debug, Clone)]
pub struct DartHasher {
    t: u64,
    t_f64: f64,
    hashes: Arc<HashFamily>,
    pow2: Box<[f64; MAX_REGION_EXP + 2]>,
}

impl DartHasher {
    pub fn new(t: u64, hashes: Arc<HashFamily>) -> Result<Self> {
        if t == 0 || t > (1 << 40) {
            return Err(Error::invalid(format!("density t must be in [1, 2^40], got {t}")));
        }
        let mut pow2 = Box::new([0.0; MAX_REGION_EXP + 2]);
        for (e, p) in pow2.iter_mut().enumerate() {
            *p = (e as f64).exp2();
        }
        Ok(Self { t, t_f64: t as f64, hashes, pow2 })
    }

    #[inline]
    pub fn t(&self) -> u64 {
        self.t
    }

    #[inline]
    pub fn hashes(&self) -> &HashFamily {
        &self.hashes
    }

    pub fn shared_hashes(&self) -> Arc<HashFamily> {
        Arc::clone(&self.hashes)
    }

    /// All darts hitting `x` with rank at most `phi / |x|_1`; `phi * t` of
    /// them in expectation. The output is unsorted.
    pub fn darts(&self, x: &WeightedSet, phi: f64) -> Result<Vec<Dart>> {
        check_phi(phi)?;
        x.require_nonempty()?;
        self.darts_below_rank(x, phi / x.l1())
    }

    /// All darts hitting `x` with rank at most `rank_limit`. The output is
    /// unsorted.
    pub fn darts_below_rank(&self, x: &WeightedSet, rank_limit: f64) -> Result<Vec<Dart>> {
        let mut out = Vec::new();
        self.darts_below_rank_into(x, rank_limit, &mut out)?;
        Ok(out)
    }

    /// Like [`darts_below_rank`](Self::darts_below_rank) but appends to `out`
    /// after clearing it, so callers can reuse the allocation.
    pub fn darts_below_rank_into(&self, x: &WeightedSet, rank_limit: f64, out: &mut Vec<Dart>) -> Result<()> {
        x.require_nonempty()?;
        if rank_limit.is_nan() || rank_limit <= 0.0 || rank_limit.is_infinite() {
            return Err(Error::invalid(format!("rank limit must be positive and finite, got {rank_limit}")));
        }
        out.clear();
        let rho_max = self.max_exponent(rank_limit, 1.0)?;
        for (element, weight) in x.iter() {
            self.element_darts(element, weight, rank_limit, rho_max, out)?;
        }
        Ok(())
    }

    /// Largest `e` with `(2^e - 1) / scale <= v`.
    fn max_exponent(&self, v: f64, scale: f64) -> Result<usize> {
        let mut e = (1.0 + scale * v).log2().floor();
        if e.is_nan() || e > MAX_REGION_EXP as f64 {
            return Err(Error::OutOfRange(format!("value {v} needs more than {MAX_REGION_EXP} dyadic regions")));
        }
        if e < 0.0 {
            e = 0.0;
        }
        let mut e = e as usize;
        while e < MAX_REGION_EXP && (self.pow2[e + 1] - 1.0) / scale <= v {
            e += 1;
        }
        Ok(e)
    }

    fn element_darts(
        &self,
        element: u64,
        x_i: f64,
        rank_limit: f64,
        rho_max: usize,
        out: &mut Vec<Dart>,
    ) -> Result<()> {
        let t = self.t_f64;
        let nu_max = self.max_exponent(x_i, t)?;
        let eh = self.hashes.element(element);
        for nu in 0..=nu_max {
            for rho in 0..=rho_max {
                let region = Region::from_powers(nu as u8, rho as u8, self.pow2[nu], self.pow2[rho], t);
                let w_cells = self.pow2[rho];
                let r_cells = self.pow2[nu];
                let mut w = 0u64;
                while (w as f64) < w_cells {
                    if x_i < region.weight_start + w as f64 * region.weight_step {
                        break;
                    }
                    let mut r = 0u64;
                    while (r as f64) < r_cells {
                        if rank_limit < region.rank_start + r as f64 * region.rank_step {
                            break;
                        }
                        let (w32, r32) = area_coords(w, r)?;
                        let area = eh.area(nu as u8, rho as u8, w32, r32);
                        let count = area.poisson1();
                        for j in 0..count as u16 {
                            let v = area.uniform(j, Stream::Weight);
                            let u = area.uniform(j, Stream::Rank);
                            let weight = region.weight_start + (w as f64 + v) * region.weight_step;
                            let rank = region.rank_start + (r as f64 + u) * region.rank_step;
                            if weight <= x_i && rank <= rank_limit {
                                out.push(Dart {
                                    index: DartIndex { element, nu: nu as u8, rho: rho as u8, w: w32, r: r32, j },
                                    weight,
                                    rank,
                                    fingerprint: area.fingerprint(j),
                                });
                            }
                        }
                        r += 1;
                    }
                    w += 1;
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn check_phi(phi: f64) -> Result<()> {
    if phi > 0.0 && phi.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("phi must be positive and finite, got {phi}")))
    }
}

#[inline]
pub(crate) fn area_coords(w: u64, r: u64) -> Result<(u32, u32)> {
    match (u32::try_from(w), u32::try_from(r)) {
        (Ok(w), Ok(r)) => Ok((w, r)),
        _ => Err(Error::OutOfRange(format!("area coordinate ({w}, {r}) exceeds 32 bits"))),
    }
}

/// Sorts darts ascending by rank with the tuple tie-break.
pub fn sort_by_rank(darts: &mut [Dart]) {
    darts.sort_unstable_by(Dart::rank_cmp);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{chi_square_p, random_set, rng};
    use proptest::prelude::*;
    use rand::Rng;

    fn hasher(t: u64, seed: u64) -> DartHasher {
        DartHasher::new(t, Arc::new(HashFamily::new(seed))).unwrap()
    }

    #[test]
    fn region_geometry_example() {
        // t = 4, region (1, 0): weights [0.25, 0.75), ranks [0, 1),
        // one weight column of width 0.5, two rank rows of height 0.5.
        let r = Region::new(1, 0, 4);
        assert_eq!(r.weight_range(), (0.25, 0.75));
        assert_eq!(r.rank_range(), (0.0, 1.0));
        assert_eq!(r.weight_cells(), 1.0);
        assert_eq!(r.rank_cells(), 2.0);
        assert_eq!(r.weight_step, 0.5);
        assert_eq!(r.rank_step, 0.5);
    }

    #[test]
    fn regions_tile_the_plane_with_unit_density_areas() {
        for t in [1u64, 3, 16, 1676] {
            for nu in 0..6u8 {
                for rho in 0..6u8 {
                    let r = Region::new(nu, rho, t);
                    let area = r.weight_step * r.rank_step;
                    assert!((area * t as f64 - 1.0).abs() < 1e-12);
                    let next_nu = Region::new(nu + 1, rho, t);
                    let next_rho = Region::new(nu, rho + 1, t);
                    assert!((r.weight_range().1 - next_nu.weight_start).abs() < 1e-12);
                    assert_eq!(r.rank_range().1, next_rho.rank_start);
                }
            }
        }
    }

    #[test]
    fn rejects_invalid_input() {
        let h = hasher(4, 1);
        let empty = WeightedSet::new([(3, 0.0)]).unwrap();
        assert_eq!(h.darts(&empty, 1.0), Err(Error::EmptySet));
        let x = WeightedSet::new([(3, 1.0)]).unwrap();
        assert!(matches!(h.darts(&x, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(h.darts(&x, -1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(h.darts(&x, f64::NAN), Err(Error::InvalidParameter(_))));
        assert!(matches!(h.darts_below_rank(&x, 0.0), Err(Error::InvalidParameter(_))));
        assert!(DartHasher::new(0, Arc::new(HashFamily::new(0))).is_err());
        let huge = WeightedSet::new([(1, 1e300)]).unwrap();
        assert!(matches!(h.darts(&huge, 1.0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn darts_respect_type_invariants() {
        let mut g = rng(3);
        for &t in &[1u64, 7, 64, 500] {
            let h = hasher(t, t);
            for _ in 0..50 {
                let x = random_set(&mut g, 20, 1000, 0.001, 0.3);
                let phi = g.random_range(0.1..4.0);
                let limit = phi / x.l1();
                for d in h.darts(&x, phi).unwrap() {
                    let i = d.index;
                    let x_i = x.weight(i.element).unwrap();
                    let p_nu = (i.nu as f64).exp2();
                    let p_rho = (i.rho as f64).exp2();
                    assert!((p_nu - 1.0) / t as f64 <= d.weight * (1.0 + 1e-12));
                    assert!(d.weight < (2.0 * p_nu - 1.0) / t as f64 * (1.0 + 1e-12));
                    assert!(d.weight <= x_i);
                    assert!(p_rho - 1.0 <= d.rank && d.rank < 2.0 * p_rho - 1.0);
                    assert!(d.rank <= limit);
                    assert_eq!(d.fingerprint, h.hashes().fingerprint(&i));
                }
            }
        }
    }

    #[test]
    fn mean_dart_count_matches_phi_t() {
        let h = hasher(1000, 17);
        let mut g = rng(99);
        let trials = 1000;
        let mut total = 0usize;
        for _ in 0..trials {
            let l0 = g.random_range(1..40);
            let x = WeightedSet::new((0..l0).map(|_| (g.random::<u64>(), 1.0))).unwrap();
            total += h.darts(&x, 1.0).unwrap().len();
        }
        let mean = total as f64 / trials as f64;
        assert!((mean - 1000.0).abs() < 5.0, "mean {mean}");
    }

    #[test]
    fn phi_and_absolute_limit_agree() {
        let h = hasher(16, 2);
        let x = random_set(&mut rng(1), 30, 1 << 20, 0.01, 2.0);
        assert_eq!(h.darts(&x, 2.0).unwrap(), h.darts_below_rank(&x, 2.0 / x.l1()).unwrap());
    }

    #[test]
    fn vanishing_rank_limit_gives_nothing() {
        let h = hasher(16, 2);
        let x = random_set(&mut rng(1), 30, 1 << 20, 0.01, 2.0);
        assert!(h.darts_below_rank(&x, 1e-12).unwrap().is_empty());
    }

    #[test]
    fn counts_are_poisson_over_seeds() {
        let t = 64;
        let mut g = rng(5);
        let trials = 10_000;
        let mut counts = Vec::with_capacity(trials);
        for s in 0..trials as u64 {
            let h = hasher(t, 1_000 + s);
            let x = random_set(&mut g, 8, u64::MAX, 0.01, 1.0);
            counts.push(h.darts(&x, 1.0).unwrap().len());
        }
        let n = trials as f64;
        let mean = counts.iter().sum::<usize>() as f64 / n;
        let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let lambda = t as f64;
        let se_mean = (lambda / n).sqrt();
        let se_var = ((lambda + 2.0 * lambda * lambda) / n).sqrt();
        assert!((mean - lambda).abs() < 3.0 * se_mean, "mean {mean}");
        assert!((var - lambda).abs() < 3.0 * se_var, "var {var}");

        let max = 200;
        let mut hist = vec![0u64; max + 1];
        for c in counts {
            hist[c.min(max)] += 1;
        }
        let probs = crate::testutil::poisson_probs(lambda, max);
        let p = chi_square_p(&hist, &probs);
        assert!(p > 0.001, "chi-square p = {p}");
    }

    fn arb_case() -> impl Strategy<Value = (Vec<(u64, f64)>, f64, f64, u64)> {
        (
            proptest::collection::btree_map(any::<u64>(), 0.001f64..3.0, 1..12)
                .prop_map(|m| m.into_iter().collect::<Vec<_>>()),
            0.05f64..3.0,
            0.05f64..3.0,
            prop_oneof![Just(1u64), Just(5), Just(64)],
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prefix_monotone_in_phi((pairs, a, b, t) in arb_case()) {
            let h = hasher(t, 77);
            let x = WeightedSet::new(pairs).unwrap();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let mut small = h.darts(&x, lo).unwrap();
            let limit = lo / x.l1();
            let mut filtered: Vec<_> = h.darts(&x, hi).unwrap().into_iter().filter(|d| d.rank <= limit).collect();
            sort_by_rank(&mut small);
            sort_by_rank(&mut filtered);
            prop_assert_eq!(small, filtered);
        }

        #[test]
        fn monotone_in_weights((pairs, bump, limit, t) in arb_case()) {
            let h = hasher(t, 78);
            let x = WeightedSet::new(pairs.clone()).unwrap();
            let y = WeightedSet::new(pairs.iter().enumerate().map(|(n, &(id, w))| {
                (id, if n % 2 == 0 { w * (1.0 + bump) } else { w })
            })).unwrap();
            let limit = limit / x.l1();
            let dx = h.darts_below_rank(&x, limit).unwrap();
            let dy = h.darts_below_rank(&y, limit).unwrap();
            for d in &dx {
                prop_assert!(dy.contains(d));
            }
        }
    }
}
