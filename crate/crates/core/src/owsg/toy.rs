//! A planted-key generator whose adversaries have success rates fixed by
//! construction, for exercising the reductions without any hardness.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::reduction::{Owsg, ThresholdAdversary};

/// Keys are integers below `key_space`; the verifier accepts iff the keys
/// match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyOwsg {
    pub key_space: u64,
}

impl Default for ToyOwsg {
    fn default() -> Self {
        Self { key_space: 1 << 32 }
    }
}

/// Opaque output state of [`ToyOwsg`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyState(u64);

impl ToyState {
    /// Reads the planted key; only test adversaries use this.
    pub fn planted_key(&self) -> u64 {
        self.0
    }
}

impl Owsg for ToyOwsg {
    type Key = u64;
    type State = ToyState;

    fn sample_key<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.key_space)
    }

    fn gen(&self, key: &u64) -> ToyState {
        ToyState(*key)
    }

    fn ver<R: Rng + ?Sized>(&self, key: &u64, state: &ToyState, _rng: &mut R) -> bool {
        *key == state.0
    }
}

/// With probability `engage` per call the adversary is active and inverts
/// each block independently with probability `p`; otherwise every answer is
/// wrong. Wrong answers are the planted key plus one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DialAdversary {
    pub engage: f64,
    pub p: f64,
}

impl DialAdversary {
    pub fn always() -> Self {
        Self { engage: 1.0, p: 1.0 }
    }

    pub fn never() -> Self {
        Self { engage: 0.0, p: 0.0 }
    }
}

impl ThresholdAdversary<ToyOwsg> for DialAdversary {
    fn attack(&self, game: &ToyOwsg, copies: &[Vec<ToyState>], rng: &mut ChaCha8Rng) -> Vec<u64> {
        let active = rng.random::<f64>() < self.engage;
        copies[0]
            .iter()
            .map(|s| {
                let k = s.planted_key();
                if active && rng.random::<f64>() < self.p {
                    k
                } else {
                    (k + 1) % game.key_space
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::owsg::reduction::{single_instance, zero_error, CopyBudget, ReductionParams};
    use rand::SeedableRng;

    fn setup(rng: &mut ChaCha8Rng) -> (ToyOwsg, ReductionParams, Vec<u64>, CopyBudget<Vec<ToyState>>) {
        let game = ToyOwsg::default();
        let params = ReductionParams::new(16, 4, 0.2, 0.2).unwrap();
        let keys: Vec<u64> = (0..8).map(|_| game.sample_key(rng)).collect();
        let states = keys.iter().map(|k| game.gen(k)).collect();
        (game, params, keys, CopyBudget::new(states, params.zero_error_copies()))
    }

    #[test]
    fn perfect_adversary_never_bottoms() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let (game, params, keys, mut front) = setup(&mut rng);
            let out = zero_error(&game, &DialAdversary::always(), &params, &mut front, &mut rng).unwrap();
            assert_eq!(out.keys, Some(keys));
            assert_eq!(out.attempts, 1);
            assert_eq!(front.used(), params.copies_per_attempt());
        }
    }

    #[test]
    fn failing_adversary_exhausts_the_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (game, params, _, mut front) = setup(&mut rng);
        let out = zero_error(&game, &DialAdversary::never(), &params, &mut front, &mut rng).unwrap();
        assert_eq!(out.keys, None);
        assert_eq!(out.attempts, 56);
        assert_eq!(front.remaining(), 0);
    }

    #[test]
    fn single_instance_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let game = ToyOwsg::default();
        let params = ReductionParams::new(4, 1, 0.2, 0.5).unwrap();
        let key = game.sample_key(&mut rng);
        let mut budget = CopyBudget::new(game.gen(&key), params.single_copies());
        let out = single_instance(&game, &DialAdversary::always(), &params, &mut budget, &mut rng).unwrap();
        assert_eq!(out.keys, Some(key));

        let mut budget = CopyBudget::new(game.gen(&key), params.single_copies());
        let out = single_instance(&game, &DialAdversary::never(), &params, &mut budget, &mut rng).unwrap();
        assert_eq!(out.keys, None);
        assert_eq!(out.attempts, params.single_attempts());
        assert_eq!(budget.remaining(), 0);
    }
}
