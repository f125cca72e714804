//! One-time signatures with quantum public keys.
//!
//! The secret key holds, for every message-bit slot and both bit values, `t`
//! random circuits. The public key is the product of their output states.
//! Signing a bit reveals the `t` circuits on that side; verification undoes
//! each revealed circuit on the matching public-key block and accepts when at
//! least `k` blocks return to `|0ⁿ⟩`. Multi-bit messages use one independent
//! slot per bit.

pub mod format;
pub mod game;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::{CircuitDescription, EnsembleParams};
use crate::error::{Error, Result};
use crate::noise::{apply_noisy_circuit, NoiseModel, NoisyOutput, SimMode};
use crate::owsg::{ver_threshold_exact, ver_threshold_sampled, OwsgKey, QState, ThresholdParams, ThresholdVerdict};

pub use format::PkManifest;
pub use game::{one_time_security_game, Forger, LearningForger, ReplayForger, SigGameConfig};

/// `n·t`, the public-key qubits for one bit value of one slot.
pub fn pubkey_qubits(n: usize, t: usize) -> usize {
    n * t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigSecretKey {
    ensemble: EnsembleParams,
    t: usize,
    /// `slots[j][b][i]` is `C_i^{(b)}` for message bit `j`.
    slots: Vec<[Vec<CircuitDescription>; 2]>,
    used: bool,
}

impl SigSecretKey {
    /// Samples `2t` circuits for each of `slots` message bits.
    pub fn generate<R: Rng + ?Sized>(ensemble: EnsembleParams, t: usize, slots: usize, rng: &mut R) -> Result<Self> {
        if t == 0 || slots == 0 {
            return Err(Error::InvalidParams("t and slot count must be at least 1".into()));
        }
        ensemble.validate()?;
        let mut draw = || -> Result<Vec<CircuitDescription>> { (0..t).map(|_| CircuitDescription::sample(ensemble, rng)).collect() };
        let slots = (0..slots).map(|_| Ok([draw()?, draw()?])).collect::<Result<_>>()?;
        Ok(Self { ensemble, t, slots, used: false })
    }

    /// Deterministic in `ensemble.seed`.
    pub fn generate_seeded(ensemble: EnsembleParams, t: usize, slots: usize) -> Result<Self> {
        Self::generate(ensemble, t, slots, &mut ensemble.rng())
    }

    pub(crate) fn from_parts(ensemble: EnsembleParams, t: usize, slots: Vec<[Vec<CircuitDescription>; 2]>, used: bool) -> Self {
        Self { ensemble, t, slots, used }
    }

    pub fn ensemble(&self) -> &EnsembleParams {
        &self.ensemble
    }

    pub fn n(&self) -> usize {
        self.ensemble.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn is_used(&self) -> bool {
        self.used
    }

    pub fn circuits(&self, slot: usize, bit: bool) -> &[CircuitDescription] {
        &self.slots[slot][bit as usize]
    }

    pub(crate) fn slots(&self) -> &[[Vec<CircuitDescription>; 2]] {
        &self.slots
    }
}

/// How public-key blocks are prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PkMode {
    /// Noiseless pure states.
    Pure,
    /// Exact noisy density operators (n ≤ 12).
    Density,
    /// One sampled noisy pure state per block.
    Trajectory,
}

/// One copy of the public key. Verification measures the blocks, so a copy is
/// consumed by a single verification.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumPublicKey {
    n: usize,
    t: usize,
    /// `blocks[j][b][i]` is the state `|C_i^{(b)}⟩` of slot `j`.
    blocks: Vec<[Vec<QState>; 2]>,
}

impl QuantumPublicKey {
    pub fn generate<R: Rng + ?Sized>(sk: &SigSecretKey, noise: &NoiseModel, mode: PkMode, rng: &mut R) -> Result<Self> {
        let mut prepare = |c: &CircuitDescription| -> Result<QState> {
            match mode {
                PkMode::Pure => {
                    if !noise.is_noiseless() {
                        return Err(Error::InvalidNoise("pure public keys require a noiseless model".into()));
                    }
                    Ok(QState::Pure(c.prepare_state()))
                }
                PkMode::Density | PkMode::Trajectory => {
                    let sim = if mode == PkMode::Density { SimMode::ExactDensity } else { SimMode::Trajectory };
                    Ok(match apply_noisy_circuit::<f64, _>(c, noise, sim, rng)? {
                        NoisyOutput::Density(r) => QState::Mixed(r),
                        NoisyOutput::Sample(s) => QState::Pure(s),
                    })
                }
            }
        };
        let mut blocks = Vec::with_capacity(sk.slot_count());
        for slot in sk.slots() {
            let zero = slot[0].iter().map(&mut prepare).collect::<Result<Vec<_>>>()?;
            let one = slot[1].iter().map(&mut prepare).collect::<Result<Vec<_>>>()?;
            blocks.push([zero, one]);
        }
        Ok(Self { n: sk.n(), t: sk.t(), blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn slot_count(&self) -> usize {
        self.blocks.len()
    }

    /// Total qubits across every block.
    pub fn total_qubits(&self) -> usize {
        self.blocks.len() * 2 * pubkey_qubits(self.n, self.t)
    }

    pub fn blocks(&self, slot: usize, bit: bool) -> &[QState] {
        &self.blocks[slot][bit as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub slot: usize,
    pub bit: bool,
    pub circuits: Vec<CircuitDescription>,
}

/// Signs `message` bit by bit with consecutive slots. A key signs at most
/// once.
pub fn sign(sk: &mut SigSecretKey, message: &[bool]) -> Result<Vec<Signature>> {
    if sk.used {
        return Err(Error::KeyReuse);
    }
    if message.len() > sk.slot_count() || message.is_empty() {
        return Err(Error::MessageTooLong { message_bits: message.len(), slots: sk.slot_count() });
    }
    sk.used = true;
    Ok(message
        .iter()
        .enumerate()
        .map(|(slot, &bit)| Signature { slot, bit, circuits: sk.circuits(slot, bit).to_vec() })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Exact acceptance probability from per-block probabilities.
    Exact,
    /// One measurement per block.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageVerdict {
    pub per_bit: Vec<ThresholdVerdict>,
    /// Product of per-bit acceptance probabilities (0/1 when sampled).
    pub accept_prob: f64,
    pub accept: bool,
}

/// Verifies `sigs` for `message` against one public-key copy, which is
/// consumed.
pub fn verify<R: Rng + ?Sized>(
    pk: QuantumPublicKey,
    message: &[bool],
    sigs: &[Signature],
    k: usize,
    mode: VerifyMode,
    rng: &mut R,
) -> Result<MessageVerdict> {
    if message.len() != sigs.len() {
        return Err(Error::BlockCountMismatch { expected: message.len(), got: sigs.len() });
    }
    if message.len() > pk.slot_count() {
        return Err(Error::MessageTooLong { message_bits: message.len(), slots: pk.slot_count() });
    }
    let params = ThresholdParams::new(pk.t, k, pk.n)?;
    let mut per_bit = Vec::with_capacity(message.len());
    for (slot, (&bit, sig)) in message.iter().zip(sigs).enumerate() {
        if sig.circuits.len() != pk.t {
            return Err(Error::BlockCountMismatch { expected: pk.t, got: sig.circuits.len() });
        }
        let keys: Vec<OwsgKey> = sig.circuits.iter().cloned().map(OwsgKey::new).collect();
        let blocks = pk.blocks(slot, bit);
        per_bit.push(match mode {
            VerifyMode::Exact => ver_threshold_exact(&keys, blocks, &params)?,
            VerifyMode::Sampled => ver_threshold_sampled(&keys, blocks, &params, rng)?,
        });
    }
    let accept_prob = per_bit.iter().map(|v| v.accept_prob).product();
    let accept = match mode {
        VerifyMode::Exact => accept_prob >= 0.5,
        VerifyMode::Sampled => per_bit.iter().all(|v| v.accept),
    };
    Ok(MessageVerdict { per_bit, accept_prob, accept })
}
