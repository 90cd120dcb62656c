//! Little-endian binary encoding of sketches.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "DMHS"
//! 4       2     version (1)
//! 6       1     kind (1 = minhash, 2 = one-bit)
//! 7       1     reserved, zero
//! 8       4     k
//! 12      8     seed
//! 20      ..    payload: k x u64 fingerprints, or ceil(k/8) bytes of bits
//!               (bit j is bit j % 8 of byte j / 8; padding bits are zero)
//! ```
//!
//! Encoded sketches are self-delimiting and may be concatenated.

use crate::error::{Error, Result};
use crate::sketch::{MinHashSketch, OneBitSketch};

pub const MAGIC: [u8; 4] = *b"DMHS";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum SketchKind {
    MinHash = 1,
    OneBit = 2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodedSketch {
    MinHash(MinHashSketch),
    OneBit(OneBitSketch),
}

fn write_header(out: &mut Vec<u8>, kind: SketchKind, k: usize, seed: u64) {
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(kind as u8);
    out.push(0);
    out.extend_from_slice(&(u32::try_from(k).expect("k fits in 32 bits")).to_le_bytes());
    out.extend_from_slice(&seed.to_le_bytes());
}

impl MinHashSketch {
    pub fn encode_into(&self, out: &mut Vec<u8>) {
        write_header(out, SketchKind::MinHash, self.k(), self.seed());
        for v in self.values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * self.k());
        self.encode_into(&mut out);
        out
    }
}

impl OneBitSketch {
    pub fn encode_into(&self, out: &mut Vec<u8>) {
        write_header(out, SketchKind::OneBit, self.k(), self.seed());
        let bytes = self.k().div_ceil(8);
        out.extend(self.words().iter().flat_map(|w| w.to_le_bytes()).take(bytes));
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.k().div_ceil(8));
        self.encode_into(&mut out);
        out
    }
}

fn le_u64(b: &[u8]) -> u64 {
    u64::from_le_bytes(b.try_into().unwrap())
}

/// Decodes one sketch from the front of `bytes`, returning it together with
/// the number of bytes consumed.
pub fn decode(bytes: &[u8]) -> Result<(EncodedSketch, usize)> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Decode(format!("need {HEADER_LEN} header bytes, got {}", bytes.len())));
    }
    if bytes[..4] != MAGIC {
        return Err(Error::Decode("bad magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::Decode(format!("unsupported version {version}")));
    }
    if bytes[7] != 0 {
        return Err(Error::Decode("reserved byte must be zero".into()));
    }
    let k = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let seed = le_u64(&bytes[12..20]);
    let body = &bytes[HEADER_LEN..];
    match bytes[6] {
        1 => {
            let len = 8 * k;
            if body.len() < len {
                return Err(Error::Decode(format!("truncated payload: need {len} bytes, got {}", body.len())));
            }
            let values = body[..len].chunks_exact(8).map(le_u64).collect();
            Ok((EncodedSketch::MinHash(MinHashSketch::new(values, seed)), HEADER_LEN + len))
        }
        2 => {
            let len = k.div_ceil(8);
            if body.len() < len {
                return Err(Error::Decode(format!("truncated payload: need {len} bytes, got {}", body.len())));
            }
            let payload = &body[..len];
            if k % 8 != 0 && payload[len - 1] >> (k % 8) != 0 {
                return Err(Error::Decode("nonzero padding bits".into()));
            }
            let words = payload
                .chunks(8)
                .map(|c| {
                    let mut w = [0u8; 8];
                    w[..c.len()].copy_from_slice(c);
                    u64::from_le_bytes(w)
                })
                .collect();
            Ok((EncodedSketch::OneBit(OneBitSketch::from_words(words, k, seed)), HEADER_LEN + len))
        }
        other => Err(Error::Decode(format!("unknown sketch kind {other}"))),
    }
}

/// Decodes a concatenation of sketches.
pub fn decode_all(mut bytes: &[u8]) -> Result<Vec<EncodedSketch>> {
    let mut out = Vec::new();
    while !bytes.is_empty() {
        let (s, used) = decode(bytes)?;
        out.push(s);
        bytes = &bytes[used..];
    }
    Ok(out)
}
