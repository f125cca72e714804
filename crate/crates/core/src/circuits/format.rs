//! Binary `.qcirc` encoding.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "QCRC"
//! 4       1     version (1)
//! 5       2     n, little-endian
//! 7       2     d, little-endian
//! 9       1     catalog id
//! 10      ..    brick indices, bits_per_brick each, packed LSB-first
//! ```
//!
//! The payload is exactly `ceil(r/8)` bytes with zero padding, and decoding
//! rejects anything else, so the encoding is a bijection onto valid files.

use super::catalog::CatalogId;
use super::ensemble::{CircuitDescription, EnsembleParams};
use crate::error::DecodeError;

pub const MAGIC: [u8; 4] = *b"QCRC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 10;

/// Appends `width` low bits of `value`, LSB first.
pub(crate) struct BitWriter {
    bytes: Vec<u8>,
    bit: usize,
}

impl BitWriter {
    pub(crate) fn new() -> Self {
        Self { bytes: Vec::new(), bit: 0 }
    }

    pub(crate) fn push(&mut self, value: u64, width: u32) {
        for i in 0..width {
            if self.bit.is_multiple_of(8) {
                self.bytes.push(0);
            }
            if (value >> i) & 1 == 1 {
                *self.bytes.last_mut().expect("pushed above") |= 1 << (self.bit % 8);
            }
            self.bit += 1;
        }
    }

    pub(crate) fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

pub(crate) struct BitReader<'a> {
    bytes: &'a [u8],
    bit: usize,
}

impl<'a> BitReader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, bit: 0 }
    }

    /// Caller guarantees enough bits remain.
    pub(crate) fn read(&mut self, width: u32) -> u64 {
        let mut v = 0u64;
        for i in 0..width {
            let b = (self.bytes[self.bit / 8] >> (self.bit % 8)) & 1;
            v |= (b as u64) << i;
            self.bit += 1;
        }
        v
    }

    /// True when every bit past the cursor is zero.
    pub(crate) fn rest_is_zero(&self) -> bool {
        (self.bit..self.bytes.len() * 8).all(|b| (self.bytes[b / 8] >> (b % 8)) & 1 == 0)
    }
}

pub fn encoded_len(params: &EnsembleParams) -> usize {
    HEADER_LEN + params.key_bits().div_ceil(8)
}

pub fn serialize(c: &CircuitDescription) -> Vec<u8> {
    let p = c.params();
    let mut out = Vec::with_capacity(encoded_len(p));
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(p.n as u16).to_le_bytes());
    out.extend_from_slice(&(p.d as u16).to_le_bytes());
    out.push(p.catalog as u8);
    let width = c.catalog().bits_per_brick();
    let mut w = BitWriter::new();
    for &b in c.bricks() {
        w.push(b as u64, width);
    }
    out.extend(w.finish());
    out
}

/// Inverse of [`serialize`]. The seed is not stored and decodes as 0.
pub fn deserialize(bytes: &[u8]) -> Result<CircuitDescription, DecodeError> {
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 4 && bytes[..4] != MAGIC {
            return Err(DecodeError::BadMagic { expected: MAGIC, found: bytes[..4].to_vec() });
        }
        return Err(DecodeError::Truncated { needed: HEADER_LEN, have: bytes.len() });
    }
    if bytes[..4] != MAGIC {
        return Err(DecodeError::BadMagic { expected: MAGIC, found: bytes[..4].to_vec() });
    }
    if bytes[4] != VERSION {
        return Err(DecodeError::UnsupportedVersion(bytes[4]));
    }
    let n = u16::from_le_bytes([bytes[5], bytes[6]]) as usize;
    let d = u16::from_le_bytes([bytes[7], bytes[8]]) as usize;
    let catalog = CatalogId::from_u8(bytes[9])?;
    let params = EnsembleParams::new(n, d, catalog, 0).map_err(|e| DecodeError::InvalidField(e.to_string()))?;
    let needed = encoded_len(&params);
    if bytes.len() < needed {
        return Err(DecodeError::Truncated { needed, have: bytes.len() });
    }
    if bytes.len() > needed {
        return Err(DecodeError::TrailingBytes(bytes.len() - needed));
    }
    let cat = catalog.catalog();
    let width = cat.bits_per_brick();
    let mut r = BitReader::new(&bytes[HEADER_LEN..]);
    let mut bricks = Vec::with_capacity(params.total_bricks());
    for _ in 0..params.total_bricks() {
        let idx = r.read(width);
        if idx >= cat.len() as u64 {
            return Err(DecodeError::InvalidBrickIndex { index: idx, size: cat.len() });
        }
        bricks.push(idx as u32);
    }
    if !r.rest_is_zero() {
        return Err(DecodeError::NonzeroPadding);
    }
    CircuitDescription::new(params, bricks).map_err(|e| DecodeError::InvalidField(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample(n: usize, d: usize, cat: CatalogId, seed: u64) -> CircuitDescription {
        CircuitDescription::sample_seeded(EnsembleParams::new(n, d, cat, seed).unwrap()).unwrap()
    }

    #[test]
    fn length_matches_key_bits() {
        // 20 qubits, depth 20: 10·10 + 9·10 = 190 bricks of 21 bits
        let c = sample(20, 20, CatalogId::Crypto, 1);
        assert_eq!(c.params().key_bits(), 190 * 21);
        assert_eq!(serialize(&c).len(), HEADER_LEN + (190 * 21usize).div_ceil(8));
        let id = sample(4, 2, CatalogId::Identity, 0);
        assert_eq!(serialize(&id).len(), HEADER_LEN);
    }

    #[test]
    fn roundtrip_many() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..1000u64 {
            let cat = CatalogId::ALL[(i % 4) as usize];
            let params = EnsembleParams::new(2 + (i % 9) as usize, 1 + (i % 5) as usize, cat, 0).unwrap();
            let c = CircuitDescription::sample(params, &mut rng).unwrap();
            assert_eq!(deserialize(&serialize(&c)).unwrap(), c);
        }
    }

    #[test]
    fn decode_errors() {
        let c = sample(5, 3, CatalogId::Crypto, 2);
        let good = serialize(&c);

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(deserialize(&bad), Err(DecodeError::BadMagic { .. })));

        let mut bad = good.clone();
        bad[4] = 7;
        assert_eq!(deserialize(&bad), Err(DecodeError::UnsupportedVersion(7)));

        let mut bad = good.clone();
        bad[9] = 42;
        assert_eq!(deserialize(&bad), Err(DecodeError::UnknownCatalog(42)));

        assert!(matches!(deserialize(&good[..good.len() - 1]), Err(DecodeError::Truncated { .. })));
        assert!(matches!(deserialize(&good[..6]), Err(DecodeError::Truncated { .. })));

        let mut bad = good.clone();
        bad.push(0);
        assert_eq!(deserialize(&bad), Err(DecodeError::TrailingBytes(1)));

        // 6 bricks · 21 bits = 126 bits, so the top two bits of the last byte pad
        let mut bad = good.clone();
        *bad.last_mut().unwrap() |= 0x80;
        assert_eq!(deserialize(&bad), Err(DecodeError::NonzeroPadding));

        // all-ones first brick exceeds the crypto catalog size
        let mut bad = good;
        bad[HEADER_LEN] = 0xff;
        bad[HEADER_LEN + 1] = 0xff;
        bad[HEADER_LEN + 2] |= 0x1f;
        assert!(matches!(deserialize(&bad), Err(DecodeError::InvalidBrickIndex { .. })));
    }
}
