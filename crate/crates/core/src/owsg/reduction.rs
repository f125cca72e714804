//! Reductions from a threshold-repetition adversary to a single-instance
//! inverter.
//!
//! [`zero_error`] embeds `t/2` challenge instances among `t/2` self-sampled
//! ones, shuffles, and keeps the adversary's answer only when it verifies on
//! the self-sampled half. [`single_instance`] plants one challenge in a random
//! slot of [`zero_error`]'s input.

use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Abstract one-way state generator with a sampled verifier.
pub trait Owsg: Sync {
    type Key: Clone + PartialEq + Debug + Send + Sync;
    type State: Clone + Send + Sync;

    fn sample_key<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Key;
    fn gen(&self, key: &Self::Key) -> Self::State;
    fn ver<R: Rng + ?Sized>(&self, key: &Self::Key, state: &Self::State, rng: &mut R) -> bool;
}

/// Attacks `t` parallel instances. `copies[c][i]` is copy `c` of block `i`;
/// the result has one key per block.
pub trait ThresholdAdversary<G: Owsg>: Sync {
    fn attack(&self, game: &G, copies: &[Vec<G::State>], rng: &mut ChaCha8Rng) -> Vec<G::Key>;
}

impl<G: Owsg, F> ThresholdAdversary<G> for F
where
    F: Fn(&G, &[Vec<G::State>], &mut ChaCha8Rng) -> Vec<G::Key> + Sync,
{
    fn attack(&self, game: &G, copies: &[Vec<G::State>], rng: &mut ChaCha8Rng) -> Vec<G::Key> {
        self(game, copies, rng)
    }
}

/// A supply of identical copies of one state, limited to a fixed count.
#[derive(Debug, Clone)]
pub struct CopyBudget<S> {
    state: S,
    remaining: usize,
    total: usize,
}

impl<S: Clone> CopyBudget<S> {
    pub fn new(state: S, copies: usize) -> Self {
        Self { state, remaining: copies, total: copies }
    }

    pub fn take(&mut self, count: usize) -> Result<Vec<S>> {
        if count > self.remaining {
            return Err(Error::InsufficientSamples { required: count, got: self.remaining });
        }
        self.remaining -= count;
        Ok(vec![self.state.clone(); count])
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn used(&self) -> usize {
        self.total - self.remaining
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionParams {
    /// Blocks in the repeated game; even.
    pub t: usize,
    /// Copies per block the adversary expects, and the inverse of its success.
    pub q: usize,
    /// Single-instance security error assumed by the back-half check.
    pub gamma: f64,
    /// Target advantage over `gamma`.
    pub xi: f64,
}

impl ReductionParams {
    pub fn new(t: usize, q: usize, gamma: f64, xi: f64) -> Result<Self> {
        if t < 2 || !t.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("t must be even and at least 2, got {t}")));
        }
        if q == 0 {
            return Err(Error::InvalidParams("q must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&gamma) || !(xi > 0.0 && xi < 1.0) {
            return Err(Error::InvalidParams(format!("need gamma in [0,1) and xi in (0,1), got {gamma}, {xi}")));
        }
        Ok(Self { t, q, gamma, xi })
    }

    pub fn half(&self) -> usize {
        self.t / 2
    }

    /// `ceil(4q·ln 8q)`.
    pub fn zero_error_attempts(&self) -> usize {
        let q = self.q as f64;
        (4.0 * q * (8.0 * q).ln()).ceil() as usize
    }

    /// Copies of the challenge tuple consumed per attempt: `q` for the
    /// adversary and one held back.
    pub fn copies_per_attempt(&self) -> usize {
        self.q + 1
    }

    /// `ceil(4q·ln 8q)·(q + 1)`.
    pub fn zero_error_copies(&self) -> usize {
        self.zero_error_attempts() * self.copies_per_attempt()
    }

    /// `ceil(128q·ln(120/ξ))`.
    pub fn single_attempts(&self) -> usize {
        (128.0 * self.q as f64 * (120.0 / self.xi).ln()).ceil() as usize
    }

    pub fn single_copies(&self) -> usize {
        self.single_attempts() * self.zero_error_copies()
    }

    /// `γ' = γ + ξ/2`.
    pub fn gamma_prime(&self) -> f64 {
        self.gamma + self.xi / 2.0
    }
}

/// Result of a reduction run: the recovered keys, or `None` for ⊥.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionOutcome<K> {
    pub keys: Option<K>,
    pub attempts: usize,
}

/// The zero-error algorithm. `front` supplies copies of the `t/2` challenge
/// states as one tuple per copy.
pub fn zero_error<G, A>(
    game: &G,
    adversary: &A,
    params: &ReductionParams,
    front: &mut CopyBudget<Vec<G::State>>,
    rng: &mut ChaCha8Rng,
) -> Result<ReductionOutcome<Vec<G::Key>>>
where
    G: Owsg,
    A: ThresholdAdversary<G> + ?Sized,
{
    let (t, half, q) = (params.t, params.half(), params.q);
    let back_threshold = params.gamma * half as f64;
    for attempt in 1..=params.zero_error_attempts() {
        let front_copies = front.take(params.copies_per_attempt())?;
        if front_copies.iter().any(|c| c.len() != half) {
            return Err(Error::BlockCountMismatch { expected: half, got: front_copies[0].len() });
        }
        let back_keys: Vec<G::Key> = (0..half).map(|_| game.sample_key(rng)).collect();
        let back_states: Vec<G::State> = back_keys.iter().map(|k| game.gen(k)).collect();

        // slot i of the adversary's input holds block perm[i]
        let mut perm: Vec<usize> = (0..t).collect();
        perm.shuffle(rng);
        let block = |c: usize, b: usize| -> G::State {
            if b < half {
                front_copies[c][b].clone()
            } else {
                back_states[b - half].clone()
            }
        };
        let input: Vec<Vec<G::State>> = (0..q).map(|c| perm.iter().map(|&b| block(c, b)).collect()).collect();
        let answer = adversary.attack(game, &input, rng);
        if answer.len() != t {
            return Err(Error::BlockCountMismatch { expected: t, got: answer.len() });
        }
        let mut unpermuted: Vec<Option<G::Key>> = vec![None; t];
        for (slot, key) in perm.iter().zip(answer) {
            unpermuted[*slot] = Some(key);
        }
        let unpermuted: Vec<G::Key> = unpermuted.into_iter().map(|k| k.expect("perm is a bijection")).collect();

        let verified = (0..half).filter(|&j| game.ver(&unpermuted[half + j], &game.gen(&back_keys[j]), rng)).count();
        if verified as f64 >= back_threshold {
            return Ok(ReductionOutcome { keys: Some(unpermuted[..half].to_vec()), attempts: attempt });
        }
    }
    Ok(ReductionOutcome { keys: None, attempts: params.zero_error_attempts() })
}

/// The single-instance inverter built on [`zero_error`].
pub fn single_instance<G, A>(
    game: &G,
    adversary: &A,
    params: &ReductionParams,
    challenge: &mut CopyBudget<G::State>,
    rng: &mut ChaCha8Rng,
) -> Result<ReductionOutcome<G::Key>>
where
    G: Owsg,
    A: ThresholdAdversary<G> + ?Sized,
{
    let half = params.half();
    let per_call = params.zero_error_copies();
    for attempt in 1..=params.single_attempts() {
        let i_star = rng.random_range(0..half);
        let mut tuple: Vec<G::State> = (0..half).map(|_| game.gen(&game.sample_key(rng))).collect();
        // every copy of the tuple needs its own copy of the challenge
        let planted = challenge.take(per_call)?;
        tuple[i_star] = planted.into_iter().next().expect("per_call >= 1");
        let mut front = CopyBudget::new(tuple, per_call);
        let out = zero_error(game, adversary, params, &mut front, rng)?;
        if let Some(keys) = out.keys {
            return Ok(ReductionOutcome { keys: Some(keys[i_star].clone()), attempts: attempt });
        }
    }
    Ok(ReductionOutcome { keys: None, attempts: params.single_attempts() })
}
