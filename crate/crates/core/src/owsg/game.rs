//! The inversion game: the adversary sees `q` copies of `|C⟩` and must name a
//! key whose verifier accepts a fresh copy.

use rand_chacha::ChaCha8Rng;

use super::{gen, ver_exact, OwsgKey, QState};
use crate::circuits::{enumerate_ensemble, EnsembleParams};
use crate::error::{Error, Result};
use crate::stats::{run_trials, GameStats};
use crate::State;

/// Adversaries receive states only, never the circuit description.
pub trait OwsgAdversary: Sync {
    fn invert(&self, copies: &[State], params: &EnsembleParams, rng: &mut ChaCha8Rng) -> Result<OwsgKey>;
}

impl<F> OwsgAdversary for F
where
    F: Fn(&[State], &EnsembleParams, &mut ChaCha8Rng) -> Result<OwsgKey> + Sync,
{
    fn invert(&self, copies: &[State], params: &EnsembleParams, rng: &mut ChaCha8Rng) -> Result<OwsgKey> {
        self(copies, params, rng)
    }
}

/// Runs `trials` rounds; each scores the exact acceptance probability of the
/// adversary's key on a fresh copy.
pub fn security_game<A: OwsgAdversary + ?Sized>(
    adversary: &A,
    params: EnsembleParams,
    q: usize,
    trials: u64,
    seed: u64,
) -> Result<GameStats> {
    if q == 0 || trials == 0 {
        return Err(Error::InvalidParams("q and trials must be at least 1".into()));
    }
    params.validate()?;
    run_trials(trials, seed, false, |rng, _| {
        let key = OwsgKey::sample(params, rng)?;
        let psi = gen(&key);
        let copies = vec![psi.clone(); q];
        let guess = adversary.invert(&copies, &params, rng)?;
        let gp = guess.circuit().params();
        if gp.n != params.n || gp.d != params.d || gp.catalog != params.catalog {
            return Err(Error::MalformedKey(format!(
                "expected n={}, d={}, {} but got n={}, d={}, {}",
                params.n, params.d, params.catalog, gp.n, gp.d, gp.catalog
            )));
        }
        ver_exact(&guess, &QState::Pure(psi))
    })
}

/// Outputs a uniformly random key, ignoring its input.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomGuess;

impl OwsgAdversary for RandomGuess {
    fn invert(&self, _copies: &[State], params: &EnsembleParams, rng: &mut ChaCha8Rng) -> Result<OwsgKey> {
        OwsgKey::sample(*params, rng)
    }
}

/// Searches an enumerable ensemble for the circuit of largest fidelity with
/// the first copy. Fidelities are read off exactly, an idealisation of
/// estimating them from many copies.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceLearner {
    pub cap: usize,
}

impl OwsgAdversary for BruteForceLearner {
    fn invert(&self, copies: &[State], params: &EnsembleParams, _rng: &mut ChaCha8Rng) -> Result<OwsgKey> {
        let target = copies.first().ok_or(Error::InsufficientSamples { required: 1, got: 0 })?;
        let mut best: Option<(f64, OwsgKey)> = None;
        for c in enumerate_ensemble(*params, self.cap)? {
            let f = c.prepare_state::<f64>().overlap(target)?;
            if best.as_ref().is_none_or(|(b, _)| f > *b + 1e-12) {
                best = Some((f, c.into()));
            }
        }
        Ok(best.expect("ensembles are nonempty").1)
    }
}

/// `(1/M)·Σ_D |⟨C|D⟩|²`, the exact success of [`RandomGuess`] against `C`.
pub fn random_guess_success(target: &State, params: EnsembleParams, cap: usize) -> Result<f64> {
    let all = enumerate_ensemble(params, cap)?;
    let mut total = 0.0;
    for c in &all {
        total += c.prepare_state::<f64>().overlap(target)?;
    }
    Ok(total / all.len() as f64)
}
