//! Two-qubit gate catalogs from which brickwork circuits draw their bricks.
//!
//! | id | name     | entries   | bits/brick | Pauli-closed |
//! |----|----------|-----------|------------|--------------|
//! | 0  | identity | 1         | 0          | no           |
//! | 1  | crypto   | 1,327,104 | 21         | yes          |
//! | 2  | enum4    | 4         | 2          | no           |
//! | 3  | enum16   | 16        | 4          | yes          |
//!
//! Pauli-closed means `(P ⊗ P')·U` lies in the catalog (up to global phase)
//! for every entry `U` and Paulis `P, P'`. Crypto entries are built on demand
//! from their mixed-radix index rather than stored.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{DecodeError, Error};
use crate::statevec::gates::{
    cz, cz_brick, hadamard, identity4, pauli, phase_t, single_qubit_cliffords,
};
use crate::statevec::kernel::{kron, mul2, mul4, Mat2, Mat4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogId {
    Identity = 0,
    Crypto = 1,
    Enum4 = 2,
    Enum16 = 3,
}

impl CatalogId {
    pub const ALL: [CatalogId; 4] = [CatalogId::Identity, CatalogId::Crypto, CatalogId::Enum4, CatalogId::Enum16];

    pub fn name(self) -> &'static str {
        match self {
            CatalogId::Identity => "identity",
            CatalogId::Crypto => "crypto",
            CatalogId::Enum4 => "enum4",
            CatalogId::Enum16 => "enum16",
        }
    }

    pub fn from_u8(id: u8) -> Result<Self, DecodeError> {
        Self::ALL.get(id as usize).copied().ok_or(DecodeError::UnknownCatalog(id))
    }

    pub fn catalog(self) -> &'static GateCatalog {
        static CATALOGS: OnceLock<[GateCatalog; 4]> = OnceLock::new();
        &CATALOGS.get_or_init(|| CatalogId::ALL.map(GateCatalog::build))[self as usize]
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown catalog `{s}`")))
    }
}

#[derive(Debug)]
enum Entries {
    Stored(Vec<(String, Mat4<f64>)>),
    /// `(a ⊗ b)·CZ·(c ⊗ d)`, `a, b` Clifford, `c, d` from `{C, T·C}`.
    Crypto { cliffords: Vec<Mat2<f64>>, inner: Vec<Mat2<f64>> },
}

#[derive(Debug)]
pub struct GateCatalog {
    id: CatalogId,
    entries: Entries,
}

const CLIFFORDS: usize = 24;
const INNER: usize = 2 * CLIFFORDS;

impl GateCatalog {
    fn build(id: CatalogId) -> Self {
        let entries = match id {
            CatalogId::Identity => Entries::Stored(vec![("II".into(), identity4())]),
            CatalogId::Crypto => {
                let cliffords = single_qubit_cliffords();
                let t = phase_t::<f64>();
                let inner = cliffords.iter().copied().chain(cliffords.iter().map(|c| mul2(&t, c))).collect();
                Entries::Crypto { cliffords, inner }
            }
            CatalogId::Enum4 => {
                let th = mul2(&phase_t(), &hadamard());
                let core = mul4(&cz(), &kron(&th, &th));
                let x = pauli::<f64>(1);
                let id2 = pauli::<f64>(0);
                let stored = (0..4)
                    .map(|i| {
                        let (a, b) = (i >> 1, i & 1);
                        let layer = kron(if a == 1 { &x } else { &id2 }, if b == 1 { &x } else { &id2 });
                        (format!("X{a}{b}.CZ.TH"), mul4(&layer, &core))
                    })
                    .collect();
                Entries::Stored(stored)
            }
            CatalogId::Enum16 => {
                let h = hadamard::<f64>();
                let t = phase_t::<f64>();
                let w = mul4(&cz(), &mul4(&kron(&h, &h), &kron(&t, &t)));
                let names = ['I', 'X', 'Y', 'Z'];
                let stored = (0..16)
                    .map(|i| {
                        let (p, q) = (i >> 2, i & 3);
                        (format!("{}{}.W", names[p], names[q]), mul4(&kron(&pauli(p), &pauli(q)), &w))
                    })
                    .collect();
                Entries::Stored(stored)
            }
        };
        Self { id, entries }
    }

    pub fn id(&self) -> CatalogId {
        self.id
    }

    pub fn len(&self) -> usize {
        match &self.entries {
            Entries::Stored(v) => v.len(),
            Entries::Crypto { .. } => CLIFFORDS * CLIFFORDS * INNER * INNER,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `ceil(log₂ |catalog|)`.
    pub fn bits_per_brick(&self) -> u32 {
        let len = self.len();
        if len <= 1 {
            0
        } else {
            usize::BITS - (len - 1).leading_zeros()
        }
    }

    pub fn pauli_closed(&self) -> bool {
        matches!(self.id, CatalogId::Crypto | CatalogId::Enum16)
    }

    /// Enumerable catalogs can be listed in full; crypto is too large.
    pub fn enumerable(&self) -> bool {
        matches!(self.entries, Entries::Stored(_))
    }

    /// Splits a crypto index into its `(a, b, c, d)` digits.
    fn crypto_digits(index: usize) -> [usize; 4] {
        let d = index % INNER;
        let c = (index / INNER) % INNER;
        let b = (index / (INNER * INNER)) % CLIFFORDS;
        let a = index / (INNER * INNER * CLIFFORDS);
        [a, b, c, d]
    }

    /// Panics if `index` is out of range; descriptions validate indices on
    /// construction.
    pub fn entry(&self, index: usize) -> Mat4<f64> {
        assert!(index < self.len(), "brick index {index} out of range for {}", self.id);
        match &self.entries {
            Entries::Stored(v) => v[index].1,
            Entries::Crypto { cliffords, inner } => {
                let [a, b, c, d] = Self::crypto_digits(index);
                cz_brick(&cliffords[a], &cliffords[b], &inner[c], &inner[d])
            }
        }
    }

    pub fn label(&self, index: usize) -> String {
        match &self.entries {
            Entries::Stored(v) => v[index].0.clone(),
            Entries::Crypto { .. } => {
                let [a, b, c, d] = Self::crypto_digits(index);
                let inner = |i: usize| if i < CLIFFORDS { format!("C{i}") } else { format!("TC{}", i - CLIFFORDS) };
                format!("C{a}xC{b}.CZ.{}x{}", inner(c), inner(d))
            }
        }
    }
}
