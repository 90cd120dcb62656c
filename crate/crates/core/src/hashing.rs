//! Seeded pseudo-random function family backing the simulated dart sequence.
//!
//! Every random quantity used by DartHash (Poisson area counts, the `V`/`U`
//! offsets of a dart inside its area, fingerprints and bucket assignments) is
//! a pure function of a fixed-width key and the family seed. Two sets that
//! probe the same area therefore see exactly the same darts.
//!
//! Keys are packed into 22 bytes:
//!
//! | field   | bytes |
//! |---------|-------|
//! | element | 8     |
//! | nu      | 1     |
//! | rho     | 1     |
//! | w       | 4     |
//! | r       | 4     |
//! | j       | 2     |
//! | stream  | 2     |
//!
//! and hashed by simple tabulation (one random 256-entry table per byte
//! position, XORed together) followed by the murmur3 64-bit finalizer. The
//! finalizer breaks the XOR-linearity of plain tabulation, which would
//! otherwise make draws for different streams at the same key differ by a
//! key-independent constant.
//!
//! Because tabulation is an XOR over byte positions, the contribution of a
//! key prefix can be computed once and reused; [`ElementHasher`] and
//! [`AreaHasher`] do exactly that and produce bit-identical values to
//! [`HashFamily::hash`].

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub const KEY_BYTES: usize = 22;
pub const POISSON_TABLE_LEN: usize = 64;

/// Largest count [`HashFamily::poisson1`] can return.
pub const MAX_AREA_DARTS: u32 = POISSON_TABLE_LEN as u32 - 1;

const NU_POS: usize = 8;
const RHO_POS: usize = 9;
const W_POS: usize = 10;
const R_POS: usize = 14;
const J_POS: usize = 18;
const STREAM_POS: usize = 20;

/// Full index of a dart: the element, the region `(nu, rho)`, the area
/// `(w, r)` inside the region and the ordinal `j` of the dart in its area.
///
/// The derived ordering is lexicographic in that field order and is used to
/// break exact rank ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DartIndex {
    pub element: u64,
    pub nu: u8,
    pub rho: u8,
    pub w: u32,
    pub r: u32,
    pub j: u16,
}

impl DartIndex {
    pub fn to_bytes(&self, stream: Stream) -> [u8; KEY_BYTES] {
        let mut b = [0u8; KEY_BYTES];
        b[..NU_POS].copy_from_slice(&self.element.to_le_bytes());
        b[NU_POS] = self.nu;
        b[RHO_POS] = self.rho;
        b[W_POS..R_POS].copy_from_slice(&self.w.to_le_bytes());
        b[R_POS..J_POS].copy_from_slice(&self.r.to_le_bytes());
        b[J_POS..STREAM_POS].copy_from_slice(&self.j.to_le_bytes());
        b[STREAM_POS..].copy_from_slice(&(stream as u16).to_le_bytes());
        b
    }
}

/// Independent draw streams at the same key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u16)]
pub enum Stream {
    /// Poisson(1) dart count of an area (keyed with `j = 0`).
    AreaCount = 0,
    /// Offset `V` of a dart along the weight axis.
    Weight = 1,
    /// Offset `U` of a dart along the rank axis.
    Rank = 2,
    Fingerprint = 3,
    IcwsR1 = 16,
    IcwsR2 = 17,
    IcwsC1 = 18,
    IcwsC2 = 19,
    IcwsBeta = 20,
}

type Tables<const N: usize> = Box<[[u64; 256]; N]>;

#[derive(Clone)]
pub struct HashFamily {
    seed: u64,
    key_tables: Tables<KEY_BYTES>,
    bucket_tables: Tables<8>,
    poisson_cdf: [f64; POISSON_TABLE_LEN],
}

impl std::fmt::Debug for HashFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HashFamily").field("seed", &self.seed).finish_non_exhaustive()
    }
}

fn fill_tables<const N: usize>(rng: &mut ChaCha20Rng) -> Tables<N> {
    let mut tables: Tables<N> = vec![[0u64; 256]; N].into_boxed_slice().try_into().unwrap();
    for table in tables.iter_mut() {
        for slot in table.iter_mut() {
            *slot = rng.next_u64();
        }
    }
    tables
}

fn poisson1_cdf() -> [f64; POISSON_TABLE_LEN] {
    let mut cdf = [0.0; POISSON_TABLE_LEN];
    let mut pmf = (-1.0f64).exp();
    let mut acc = 0.0;
    for (k, slot) in cdf.iter_mut().enumerate() {
        if k > 0 {
            pmf /= k as f64;
        }
        acc += pmf;
        *slot = acc.min(1.0);
    }
    // Mass beyond the table is below 1e-87; the last count absorbs it.
    cdf[POISSON_TABLE_LEN - 1] = 1.0;
    cdf
}

/// murmur3 fmix64.
#[inline(always)]
pub(crate) fn mix64(mut h: u64) -> u64 {
    h ^= h >> 33;
    h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
    h ^= h >> 33;
    h = h.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    h ^ (h >> 33)
}

/// Maps a 64-bit hash to `[0, 1)` using its top 53 bits.
#[inline(always)]
pub fn to_unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl HashFamily {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let key_tables = fill_tables::<KEY_BYTES>(&mut rng);
        let bucket_tables = fill_tables::<8>(&mut rng);
        Self { seed, key_tables, bucket_tables, poisson_cdf: poisson1_cdf() }
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn poisson_cdf(&self) -> &[f64; POISSON_TABLE_LEN] {
        &self.poisson_cdf
    }

    /// Raw 64-bit hash of `(key, stream)`.
    pub fn hash(&self, key: &DartIndex, stream: Stream) -> u64 {
        let bytes = key.to_bytes(stream);
        let h = bytes.iter().zip(self.key_tables.iter()).fold(0u64, |acc, (&b, table)| acc ^ table[b as usize]);
        mix64(h)
    }

    /// Uniform variate in `[0, 1)`.
    pub fn uniform(&self, key: &DartIndex, stream: Stream) -> f64 {
        to_unit(self.hash(key, stream))
    }

    /// Poisson(1) count for the area of `key` (its `j` field is ignored).
    pub fn poisson1(&self, key: &DartIndex) -> u32 {
        let area = DartIndex { j: 0, ..*key };
        self.poisson_from_unit(self.uniform(&area, Stream::AreaCount))
    }

    pub fn fingerprint(&self, key: &DartIndex) -> u64 {
        self.hash(key, Stream::Fingerprint)
    }

    /// Inverse-CDF lookup into the Poisson(1) table.
    #[inline]
    pub fn poisson_from_unit(&self, u: f64) -> u32 {
        let mut k = 0;
        while k < MAX_AREA_DARTS as usize && u >= self.poisson_cdf[k] {
            k += 1;
        }
        k as u32
    }

    /// Assigns a fingerprint to one of `k` buckets.
    #[inline]
    pub fn bucket(&self, fp: u64, k: usize) -> usize {
        debug_assert!(k >= 1);
        let bytes = fp.to_le_bytes();
        let mut h = 0u64;
        for (b, table) in bytes.iter().zip(self.bucket_tables.iter()) {
            h ^= table[*b as usize];
        }
        ((mix64(h) as u128 * k as u128) >> 64) as usize
    }

    /// Precomputes the contribution of the element bytes of the key.
    #[inline]
    pub fn element(&self, element: u64) -> ElementHasher<'_> {
        let bytes = element.to_le_bytes();
        let mut prefix = 0u64;
        for (pos, b) in bytes.iter().enumerate() {
            prefix ^= self.key_tables[pos][*b as usize];
        }
        ElementHasher { family: self, element, prefix }
    }
}

/// Key prefix for one element.
#[derive(Clone, Copy)]
pub struct ElementHasher<'a> {
    family: &'a HashFamily,
    element: u64,
    prefix: u64,
}

impl<'a> ElementHasher<'a> {
    #[inline]
    pub fn area(&self, nu: u8, rho: u8, w: u32, r: u32) -> AreaHasher<'a> {
        let t = &self.family.key_tables;
        let w = w.to_le_bytes();
        let r = r.to_le_bytes();
        let prefix = self.prefix
            ^ t[NU_POS][nu as usize]
            ^ t[RHO_POS][rho as usize]
            ^ t[W_POS][w[0] as usize]
            ^ t[W_POS + 1][w[1] as usize]
            ^ t[W_POS + 2][w[2] as usize]
            ^ t[W_POS + 3][w[3] as usize]
            ^ t[R_POS][r[0] as usize]
            ^ t[R_POS + 1][r[1] as usize]
            ^ t[R_POS + 2][r[2] as usize]
            ^ t[R_POS + 3][r[3] as usize];
        AreaHasher { family: self.family, prefix }
    }

    pub fn element(&self) -> u64 {
        self.element
    }
}

/// Key prefix for one `(element, nu, rho, w, r)` area.
#[derive(Clone, Copy)]
pub struct AreaHasher<'a> {
    family: &'a HashFamily,
    prefix: u64,
}

impl AreaHasher<'_> {
    #[inline(always)]
    pub fn hash(&self, j: u16, stream: Stream) -> u64 {
        let t = &self.family.key_tables;
        let j = j.to_le_bytes();
        let s = (stream as u16).to_le_bytes();
        mix64(
            self.prefix
                ^ t[J_POS][j[0] as usize]
                ^ t[J_POS + 1][j[1] as usize]
                ^ t[STREAM_POS][s[0] as usize]
                ^ t[STREAM_POS + 1][s[1] as usize],
        )
    }

    #[inline(always)]
    pub fn uniform(&self, j: u16, stream: Stream) -> f64 {
        to_unit(self.hash(j, stream))
    }

    #[inline(always)]
    pub fn poisson1(&self) -> u32 {
        self.family.poisson_from_unit(self.uniform(0, Stream::AreaCount))
    }

    #[inline(always)]
    pub fn fingerprint(&self, j: u16) -> u64 {
        self.hash(j, Stream::Fingerprint)
    }
}
