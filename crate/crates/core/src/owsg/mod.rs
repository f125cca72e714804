//! The random-circuit one-way state generator.
//!
//! The key is a brickwork circuit `C`, the generated state is `|C⟩ = C|0ⁿ⟩`,
//! and verification applies `C†` and accepts on the all-zeros outcome. The
//! construction is exactly correct: `ver(C, gen(C)) = 1`.

pub mod game;
pub mod reduction;
pub mod threshold;
pub mod toy;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::{CircuitDescription, EnsembleParams};
use crate::density::DensityOperator;
use crate::error::{Error, Result};
use crate::{Density, State};

pub use game::{security_game, BruteForceLearner, OwsgAdversary, RandomGuess};
pub use reduction::{single_instance, zero_error, CopyBudget, Owsg, ReductionParams, ThresholdAdversary};
pub use threshold::{threshold_k, ver_threshold_exact, ver_threshold_sampled, ThresholdParams, ThresholdVerdict};
pub use crate::stats::GameStats;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OwsgKey {
    circuit: CircuitDescription,
}

impl OwsgKey {
    pub fn new(circuit: CircuitDescription) -> Self {
        Self { circuit }
    }

    pub fn sample<R: Rng + ?Sized>(params: EnsembleParams, rng: &mut R) -> Result<Self> {
        Ok(Self::new(CircuitDescription::sample(params, rng)?))
    }

    pub fn circuit(&self) -> &CircuitDescription {
        &self.circuit
    }

    pub fn n(&self) -> usize {
        self.circuit.n()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        crate::circuits::serialize(&self.circuit)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Ok(Self::new(crate::circuits::deserialize(bytes)?))
    }
}

impl From<CircuitDescription> for OwsgKey {
    fn from(c: CircuitDescription) -> Self {
        Self::new(c)
    }
}

/// A block handed to the verifier: a pure state or a (noisy) mixed one.
#[derive(Debug, Clone, PartialEq)]
pub enum QState {
    Pure(State),
    Mixed(Density),
}

impl QState {
    pub fn n_qubits(&self) -> usize {
        match self {
            QState::Pure(s) => s.n_qubits(),
            QState::Mixed(r) => r.n_qubits(),
        }
    }
}

impl From<State> for QState {
    fn from(s: State) -> Self {
        QState::Pure(s)
    }
}

impl From<DensityOperator<f64>> for QState {
    fn from(r: Density) -> Self {
        QState::Mixed(r)
    }
}

/// `|C⟩`.
pub fn gen(key: &OwsgKey) -> State {
    key.circuit.prepare_state()
}

fn check_width(key: &OwsgKey, n: usize) -> Result<()> {
    if key.n() != n {
        return Err(Error::DimensionMismatch { left: key.n(), right: n });
    }
    Ok(())
}

/// `⟨0ⁿ|C† ρ C|0ⁿ⟩`, computed by undoing the circuit on the input.
pub fn ver_exact(key: &OwsgKey, state: &QState) -> Result<f64> {
    check_width(key, state.n_qubits())?;
    match state {
        QState::Pure(s) => {
            let mut s = s.clone();
            key.circuit.apply_inverse(&mut s)?;
            Ok(s.probability(0))
        }
        QState::Mixed(rho) => {
            let mut rho = rho.clone();
            for g in key.circuit.inverse_gates::<f64>() {
                rho.apply(&g)?;
            }
            Ok(rho.probability(0))
        }
    }
}

/// One run of the verifier: apply `C†`, measure every qubit, accept on `0ⁿ`.
pub fn ver_sampled<R: Rng + ?Sized>(key: &OwsgKey, state: &QState, rng: &mut R) -> Result<bool> {
    check_width(key, state.n_qubits())?;
    match state {
        QState::Pure(s) => {
            let mut s = s.clone();
            key.circuit.apply_inverse(&mut s)?;
            Ok(s.measure_all(rng) == 0)
        }
        // the all-zeros outcome of a mixed state is a Bernoulli draw on its
        // exact probability
        QState::Mixed(_) => Ok(rng.random::<f64>() < ver_exact(key, state)?),
    }
}

/// The circuit generator as an instance of the abstract [`Owsg`] interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitOwsg {
    pub params: EnsembleParams,
}

impl Owsg for CircuitOwsg {
    type Key = OwsgKey;
    type State = State;

    fn sample_key<R: Rng + ?Sized>(&self, rng: &mut R) -> OwsgKey {
        OwsgKey::sample(self.params, rng).expect("validated params")
    }

    fn gen(&self, key: &OwsgKey) -> State {
        gen(key)
    }

    fn ver<R: Rng + ?Sized>(&self, key: &OwsgKey, state: &State, rng: &mut R) -> bool {
        ver_sampled(key, &QState::Pure(state.clone()), rng).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::CatalogId;
    use crate::noise::white_noise_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn key(n: usize, seed: u64) -> OwsgKey {
        OwsgKey::new(CircuitDescription::sample_seeded(EnsembleParams::with_default_depth(n, CatalogId::Crypto, seed).unwrap()).unwrap())
    }

    #[test]
    fn identity_key_generates_zero_state() {
        let k = OwsgKey::new(CircuitDescription::constant(EnsembleParams::new(4, 2, CatalogId::Identity, 0).unwrap()).unwrap());
        assert_eq!(gen(&k), State::zero(4));
    }

    #[test]
    fn correctness_and_overlap() {
        let a = key(5, 1);
        let b = key(5, 2);
        let psi = gen(&a);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!((ver_exact(&a, &psi.clone().into()).unwrap() - 1.0).abs() < 1e-10);
        let cross = ver_exact(&a, &gen(&b).into()).unwrap();
        assert!((cross - gen(&a).overlap(&gen(&b)).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn white_noise_acceptance_identity() {
        let k = key(4, 3);
        let rho = DensityOperator::from_pure(&gen(&k)).unwrap();
        let f = 0.6;
        let noisy = white_noise_state(&rho, f).unwrap();
        let p = ver_exact(&k, &noisy.into()).unwrap();
        assert!((p - (f + (1.0 - f) / 16.0)).abs() < 1e-12);
    }

    #[test]
    fn sampled_ver_agrees_with_exact() {
        let a = key(3, 4);
        let b = key(3, 5);
        let state: QState = gen(&b).into();
        let p = ver_exact(&a, &state).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trials = 4000;
        let hits = (0..trials).filter(|_| ver_sampled(&a, &state, &mut rng).unwrap()).count();
        assert!(crate::stats::within_binomial_sigma(hits as f64, trials as f64, p, 4.0));
    }

    #[test]
    fn width_mismatch_is_an_error() {
        assert!(matches!(ver_exact(&key(4, 1), &State::zero(3).into()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn key_bytes_roundtrip() {
        let k = key(7, 9);
        let back = OwsgKey::from_bytes(&k.to_bytes()).unwrap();
        assert_eq!(back.circuit().bricks(), k.circuit().bricks());
    }
}
