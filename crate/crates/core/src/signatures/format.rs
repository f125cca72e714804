//! Binary containers for signing keys and signatures.
//!
//! Both are a 4-byte magic, a version byte, a small fixed header, then
//! length-prefixed `.qcirc` records (`u32` little-endian length, then bytes).
//!
//! ```text
//! QSKY  version  used:u8  seed:u64  slots:u32  t:u32  records[slots·2·t]
//! QSIG  version  count:u32  { slot:u32  bit:u8  t:u32  records[t] }[count]
//! ```
//!
//! Secret-key records are ordered slot-major, then bit, then index.

use serde::{Deserialize, Serialize};

use super::{PkMode, SigSecretKey, Signature};
use crate::circuits::{self, CatalogId, CircuitDescription, EnsembleParams};
use crate::error::{DecodeError, Result};
use crate::noise::NoiseModel;

pub const SK_MAGIC: [u8; 4] = *b"QSKY";
pub const SIG_MAGIC: [u8; 4] = *b"QSIG";
pub const VERSION: u8 = 1;

/// Classical description of how a public key was prepared. The quantum
/// blocks themselves cannot be written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PkManifest {
    pub n: usize,
    pub d: usize,
    pub catalog: CatalogId,
    pub t: usize,
    pub slots: usize,
    pub mode: PkMode,
    pub noise: NoiseModel,
    pub qubits_per_bit_value: usize,
}

impl PkManifest {
    pub fn new(sk: &SigSecretKey, noise: NoiseModel, mode: PkMode) -> Self {
        let e = sk.ensemble();
        Self {
            n: e.n,
            d: e.d,
            catalog: e.catalog,
            t: sk.t(),
            slots: sk.slot_count(),
            mode,
            noise,
            qubits_per_bit_value: super::pubkey_qubits(e.n, sk.t()),
        }
    }
}

fn put_record(out: &mut Vec<u8>, c: &CircuitDescription) {
    let bytes = circuits::serialize(c);
    out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
    out.extend_from_slice(&bytes);
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8], DecodeError> {
        let end = self.pos + len;
        if end > self.bytes.len() {
            return Err(DecodeError::Truncated { needed: end, have: self.bytes.len() });
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64, DecodeError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn header(&mut self, magic: [u8; 4]) -> Result<(), DecodeError> {
        let found = self.take(4.min(self.bytes.len()))?;
        if found != magic {
            return Err(DecodeError::BadMagic { expected: magic, found: found.to_vec() });
        }
        let v = self.u8()?;
        if v != VERSION {
            return Err(DecodeError::UnsupportedVersion(v));
        }
        Ok(())
    }

    fn record(&mut self) -> Result<CircuitDescription, DecodeError> {
        let len = self.u32()? as usize;
        circuits::deserialize(self.take(len)?)
    }

    fn finish(&self) -> Result<(), DecodeError> {
        match self.bytes.len() - self.pos {
            0 => Ok(()),
            extra => Err(DecodeError::TrailingBytes(extra)),
        }
    }
}

/// All records must share one ensemble shape.
fn check_shape(first: &mut Option<EnsembleParams>, c: &CircuitDescription) -> Result<(), DecodeError> {
    let p = *c.params();
    match first {
        None => *first = Some(p),
        Some(f) if (f.n, f.d, f.catalog) != (p.n, p.d, p.catalog) => {
            return Err(DecodeError::InvalidField("records use different ensembles".into()));
        }
        _ => {}
    }
    Ok(())
}

pub fn serialize_secret_key(sk: &SigSecretKey) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&SK_MAGIC);
    out.push(VERSION);
    out.push(sk.is_used() as u8);
    out.extend_from_slice(&sk.ensemble().seed.to_le_bytes());
    out.extend_from_slice(&(sk.slot_count() as u32).to_le_bytes());
    out.extend_from_slice(&(sk.t() as u32).to_le_bytes());
    for slot in sk.slots() {
        for side in slot {
            for c in side {
                put_record(&mut out, c);
            }
        }
    }
    out
}

pub fn deserialize_secret_key(bytes: &[u8]) -> Result<SigSecretKey, DecodeError> {
    let mut cur = Cursor::new(bytes);
    cur.header(SK_MAGIC)?;
    let used = match cur.u8()? {
        0 => false,
        1 => true,
        x => return Err(DecodeError::InvalidField(format!("used flag {x}"))),
    };
    let seed = cur.u64()?;
    let slots = cur.u32()? as usize;
    let t = cur.u32()? as usize;
    if slots == 0 || t == 0 {
        return Err(DecodeError::InvalidField("slot count and t must be positive".into()));
    }
    let mut shape = None;
    let mut all = Vec::with_capacity(slots);
    for _ in 0..slots {
        let mut side = || -> Result<Vec<CircuitDescription>, DecodeError> {
            (0..t)
                .map(|_| {
                    let c = cur.record()?;
                    check_shape(&mut shape, &c)?;
                    Ok(c)
                })
                .collect()
        };
        let zero = side()?;
        let one = side()?;
        all.push([zero, one]);
    }
    cur.finish()?;
    let ensemble = EnsembleParams { seed, ..shape.expect("at least one record") };
    // records decode with seed 0; restore the key's seed on each
    let all = all
        .into_iter()
        .map(|sides| {
            sides.map(|side| {
                side.into_iter()
                    .map(|c| CircuitDescription::new(ensemble, c.bricks().to_vec()).expect("decoded circuit is valid"))
                    .collect()
            })
        })
        .collect();
    Ok(SigSecretKey::from_parts(ensemble, t, all, used))
}

pub fn serialize_signatures(sigs: &[Signature]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&SIG_MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(sigs.len() as u32).to_le_bytes());
    for s in sigs {
        out.extend_from_slice(&(s.slot as u32).to_le_bytes());
        out.push(s.bit as u8);
        out.extend_from_slice(&(s.circuits.len() as u32).to_le_bytes());
        for c in &s.circuits {
            put_record(&mut out, c);
        }
    }
    out
}

pub fn deserialize_signatures(bytes: &[u8]) -> Result<Vec<Signature>, DecodeError> {
    let mut cur = Cursor::new(bytes);
    cur.header(SIG_MAGIC)?;
    let count = cur.u32()? as usize;
    let mut shape = None;
    let mut out = Vec::new();
    for _ in 0..count {
        let slot = cur.u32()? as usize;
        let bit = match cur.u8()? {
            0 => false,
            1 => true,
            x => return Err(DecodeError::InvalidField(format!("bit value {x}"))),
        };
        let t = cur.u32()? as usize;
        let circuits = (0..t)
            .map(|_| {
                let c = cur.record()?;
                check_shape(&mut shape, &c)?;
                Ok(c)
            })
            .collect::<Result<_, DecodeError>>()?;
        out.push(Signature { slot, bit, circuits });
    }
    cur.finish()?;
    Ok(out)
}
