use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::catalog::{CatalogId, GateCatalog};
use crate::error::{DecodeError, Error, Result};
use crate::scalar::Real;
use crate::statevec::gates::cast4;
use crate::statevec::{GateOp, StateVector};

/// `ceil((log₂ n)²)`, at least 1.
pub fn default_depth(n: usize) -> usize {
    let l = (n.max(1) as f64).log2();
    ((l * l).ceil() as usize).max(1)
}

/// Qubit pairs covered by layer `layer`: `(0,1),(2,3),…` on even layers and
/// `(1,2),(3,4),…` on odd ones.
pub fn layer_pairs(n: usize, layer: usize) -> Vec<(usize, usize)> {
    (layer % 2..n.saturating_sub(1)).step_by(2).map(|q| (q, q + 1)).collect()
}

pub fn bricks_in_layer(n: usize, layer: usize) -> usize {
    if layer.is_multiple_of(2) {
        n / 2
    } else {
        n.saturating_sub(1) / 2
    }
}

pub fn total_bricks(n: usize, d: usize) -> usize {
    (0..d).map(|l| bricks_in_layer(n, l)).sum()
}

/// `r(n)`: total bricks times bits per brick.
pub fn key_bits(n: usize, d: usize, catalog: CatalogId) -> usize {
    total_bricks(n, d) * catalog.catalog().bits_per_brick() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub d: usize,
    pub catalog: CatalogId,
    pub seed: u64,
}

impl EnsembleParams {
    pub fn new(n: usize, d: usize, catalog: CatalogId, seed: u64) -> Result<Self> {
        let p = Self { n, d, catalog, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn with_default_depth(n: usize, catalog: CatalogId, seed: u64) -> Result<Self> {
        Self::new(n, default_depth(n), catalog, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!("need n >= 2, got {}", self.n)));
        }
        if self.d == 0 {
            return Err(Error::InvalidParams("depth must be at least 1".into()));
        }
        if self.n > u16::MAX as usize || self.d > u16::MAX as usize {
            return Err(Error::InvalidParams("n and d must fit in 16 bits".into()));
        }
        Ok(())
    }

    pub fn total_bricks(&self) -> usize {
        total_bricks(self.n, self.d)
    }

    pub fn key_bits(&self) -> usize {
        key_bits(self.n, self.d, self.catalog)
    }

    /// `|catalog|^bricks` as a float; exact for the enumerable sizes.
    pub fn ensemble_size(&self) -> f64 {
        (self.catalog.catalog().len() as f64).powi(self.total_bricks() as i32)
    }

    /// Fresh RNG stream derived from `seed`.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A brickwork circuit: ensemble parameters plus one catalog index per brick
/// in layer-major order. Doubles as the secret key of the state generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircuitDescription {
    params: EnsembleParams,
    bricks: Vec<u32>,
}

/// One placed brick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Brick {
    pub layer: usize,
    pub pair: (usize, usize),
    pub index: u32,
}

impl CircuitDescription {
    pub fn new(params: EnsembleParams, bricks: Vec<u32>) -> Result<Self> {
        params.validate()?;
        let expected = params.total_bricks();
        if bricks.len() != expected {
            return Err(Error::InvalidParams(format!("expected {expected} bricks, got {}", bricks.len())));
        }
        let size = params.catalog.catalog().len();
        if let Some(&bad) = bricks.iter().find(|&&b| b as usize >= size) {
            return Err(DecodeError::InvalidBrickIndex { index: bad as u64, size }.into());
        }
        Ok(Self { params, bricks })
    }

    /// Every brick drawn uniformly and independently from the catalog.
    pub fn sample<R: Rng + ?Sized>(params: EnsembleParams, rng: &mut R) -> Result<Self> {
        params.validate()?;
        let cat = params.catalog.catalog();
        if cat.is_empty() {
            return Err(Error::EmptyCatalog(params.catalog.name().into()));
        }
        let len = cat.len() as u32;
        let bricks = (0..params.total_bricks()).map(|_| rng.random_range(0..len)).collect();
        Ok(Self { params, bricks })
    }

    /// [`sample`](Self::sample) on the stream seeded by `params.seed`.
    pub fn sample_seeded(params: EnsembleParams) -> Result<Self> {
        Self::sample(params, &mut params.rng())
    }

    /// The circuit whose every brick is catalog entry 0.
    pub fn constant(params: EnsembleParams) -> Result<Self> {
        Self::new(params, vec![0; params.total_bricks()])
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn bricks(&self) -> &[u32] {
        &self.bricks
    }

    pub fn catalog(&self) -> &'static GateCatalog {
        self.params.catalog.catalog()
    }

    pub fn placed(&self) -> impl Iterator<Item = Brick> + '_ {
        let n = self.params.n;
        (0..self.params.d)
            .flat_map(move |layer| layer_pairs(n, layer).into_iter().map(move |pair| (layer, pair)))
            .zip(&self.bricks)
            .map(|((layer, pair), &index)| Brick { layer, pair, index })
    }

    /// Gate sequence in application order.
    pub fn gates<T: Real>(&self) -> Vec<GateOp<T>> {
        let cat = self.catalog();
        self.placed()
            .map(|b| {
                GateOp::pair(cat.label(b.index as usize), b.pair.0, b.pair.1, cast4(&cat.entry(b.index as usize)))
                    .expect("catalog entries are unitary on distinct adjacent qubits")
            })
            .collect()
    }

    /// `C†` as a gate sequence: layers reversed, each brick adjointed.
    pub fn inverse_gates<T: Real>(&self) -> Vec<GateOp<T>> {
        let mut g: Vec<GateOp<T>> = self.gates::<T>().iter().map(GateOp::adjoint).collect();
        g.reverse();
        g
    }

    /// `|C⟩ = C|0ⁿ⟩`.
    pub fn prepare_state<T: Real>(&self) -> StateVector<T> {
        let mut s = StateVector::zero(self.params.n);
        self.apply_to(&mut s).expect("circuit width matches state");
        s
    }

    pub fn apply_to<T: Real>(&self, state: &mut StateVector<T>) -> Result<()> {
        self.check_width(state)?;
        state.apply_all(&self.gates::<T>())
    }

    pub fn apply_inverse<T: Real>(&self, state: &mut StateVector<T>) -> Result<()> {
        self.check_width(state)?;
        state.apply_all(&self.inverse_gates::<T>())
    }

    fn check_width<T: Real>(&self, state: &StateVector<T>) -> Result<()> {
        if state.n_qubits() != self.params.n {
            return Err(Error::DimensionMismatch { left: self.params.n, right: state.n_qubits() });
        }
        Ok(())
    }

    /// One line per brick: `layer<TAB>q0,q1<TAB>label`.
    pub fn text_dump(&self) -> String {
        let cat = self.catalog();
        self.placed()
            .map(|b| format!("{}\t{},{}\t{}\n", b.layer, b.pair.0, b.pair.1, cat.label(b.index as usize)))
            .collect()
    }
}

/// Every circuit of the ensemble in lexicographic order of the brick list
/// (last brick varies fastest).
pub fn enumerate_ensemble(params: EnsembleParams, cap: usize) -> Result<Vec<CircuitDescription>> {
    params.validate()?;
    let size = params.ensemble_size();
    if size > cap as f64 {
        return Err(Error::EnsembleTooLarge { size, cap });
    }
    let base = params.catalog.catalog().len() as u32;
    let bricks = params.total_bricks();
    let count = size as usize;
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0u32; bricks];
    for _ in 0..count {
        out.push(CircuitDescription { params, bricks: digits.clone() });
        for pos in (0..bricks).rev() {
            digits[pos] += 1;
            if digits[pos] < base {
                break;
            }
            digits[pos] = 0;
        }
    }
    Ok(out)
}
