//! The one-time security experiment: the forger sees `p` public-key copies,
//! picks a message, receives its signature, and must output a valid
//! signature on a different message.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{sign, verify, PkMode, QuantumPublicKey, SigSecretKey, Signature, VerifyMode};
use crate::circuits::EnsembleParams;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::owsg::{OwsgAdversary, QState};
use crate::stats::{run_trials, GameStats};
use crate::State;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigGameConfig {
    pub ensemble: EnsembleParams,
    pub t: usize,
    pub slots: usize,
    pub k: usize,
    pub noise: NoiseModel,
    pub mode: PkMode,
    /// Public-key copies handed to the forger.
    pub copies: usize,
}

pub trait Forger: Sync {
    fn choose(&self, pk: &[QuantumPublicKey], rng: &mut ChaCha8Rng) -> Result<Vec<bool>>;

    fn forge(
        &self,
        pk: &[QuantumPublicKey],
        message: &[bool],
        sigs: &[Signature],
        rng: &mut ChaCha8Rng,
    ) -> Result<(Vec<bool>, Vec<Signature>)>;
}

/// Scores each trial by the exact acceptance probability of the forgery on a
/// fresh public-key copy, or 0 when the forged message equals the signed one.
pub fn one_time_security_game<F: Forger + ?Sized>(forger: &F, cfg: &SigGameConfig, trials: u64, seed: u64) -> Result<GameStats> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    run_trials(trials, seed, false, |rng, _| {
        let mut sk = SigSecretKey::generate(cfg.ensemble, cfg.t, cfg.slots, rng)?;
        let copies = (0..cfg.copies)
            .map(|_| QuantumPublicKey::generate(&sk, &cfg.noise, cfg.mode, rng))
            .collect::<Result<Vec<_>>>()?;
        let message = forger.choose(&copies, rng)?;
        let sigs = sign(&mut sk, &message)?;
        let (forged_msg, forged_sigs) = forger.forge(&copies, &message, &sigs, rng)?;
        if forged_msg.len() != forged_sigs.len() || forged_msg.is_empty() || forged_msg.len() > cfg.slots {
            return Err(Error::MalformedKey(format!(
                "forged message of {} bits with {} signatures",
                forged_msg.len(),
                forged_sigs.len()
            )));
        }
        if forged_msg == message {
            return Ok(0.0);
        }
        let fresh = QuantumPublicKey::generate(&sk, &cfg.noise, cfg.mode, rng)?;
        Ok(verify(fresh, &forged_msg, &forged_sigs, cfg.k, VerifyMode::Exact, rng)?.accept_prob)
    })
}

/// Signs the all-zeros message and replays it unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReplayForger;

impl Forger for ReplayForger {
    fn choose(&self, pk: &[QuantumPublicKey], _rng: &mut ChaCha8Rng) -> Result<Vec<bool>> {
        Ok(vec![false; pk.first().map_or(1, |p| p.slot_count())])
    }

    fn forge(&self, _: &[QuantumPublicKey], m: &[bool], s: &[Signature], _: &mut ChaCha8Rng) -> Result<(Vec<bool>, Vec<Signature>)> {
        Ok((m.to_vec(), s.to_vec()))
    }
}

/// Asks for a signature on `0`, then learns the bit-1 circuits of slot 0 from
/// the public-key copies and claims the message `1`.
#[derive(Debug, Clone)]
pub struct LearningForger<L> {
    pub learner: L,
    pub ensemble: EnsembleParams,
}

impl<L: OwsgAdversary> Forger for LearningForger<L> {
    fn choose(&self, _: &[QuantumPublicKey], _: &mut ChaCha8Rng) -> Result<Vec<bool>> {
        Ok(vec![false])
    }

    fn forge(&self, pk: &[QuantumPublicKey], _: &[bool], _: &[Signature], rng: &mut ChaCha8Rng) -> Result<(Vec<bool>, Vec<Signature>)> {
        let t = pk.first().ok_or(Error::InsufficientSamples { required: 1, got: 0 })?.t();
        let mut circuits = Vec::with_capacity(t);
        for i in 0..t {
            let copies: Vec<State> = pk
                .iter()
                .map(|p| match &p.blocks(0, true)[i] {
                    QState::Pure(s) => Ok(s.clone()),
                    QState::Mixed(_) => Err(Error::InvalidParams("learning forger needs pure public-key blocks".into())),
                })
                .collect::<Result<_>>()?;
            circuits.push(self.learner.invert(&copies, &self.ensemble, rng)?.circuit().clone());
        }
        Ok((vec![true], vec![Signature { slot: 0, bit: true, circuits }]))
    }
}
