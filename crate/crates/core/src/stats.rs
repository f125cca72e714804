//! Monte Carlo bookkeeping and exact tail probabilities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Independent stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Running totals for a game whose per-trial score lies in `[0, 1]`.
///
/// Binary games score 0 or 1 and get a Wilson interval; exact-mode games
/// score an acceptance probability and get a normal interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameStats {
    trials: u64,
    successes: f64,
    sum_sq: f64,
    binary: bool,
}

impl GameStats {
    pub fn binary() -> Self {
        Self { trials: 0, successes: 0.0, sum_sq: 0.0, binary: true }
    }

    pub fn scored() -> Self {
        Self { binary: false, ..Self::binary() }
    }

    pub fn from_scores(scores: impl IntoIterator<Item = f64>, binary: bool) -> Self {
        let mut s = if binary { Self::binary() } else { Self::scored() };
        for x in scores {
            s.record(x);
        }
        s
    }

    pub fn record(&mut self, score: f64) {
        debug_assert!((-1e-9..=1.0 + 1e-9).contains(&score), "score {score} outside [0, 1]");
        self.trials += 1;
        self.successes += score;
        self.sum_sq += score * score;
    }

    pub fn record_bool(&mut self, ok: bool) {
        self.record(if ok { 1.0 } else { 0.0 });
    }

    pub fn merge(&mut self, other: &Self) {
        self.trials += other.trials;
        self.successes += other.successes;
        self.sum_sq += other.sum_sq;
        self.binary &= other.binary;
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// Sum of scores; a count for binary games.
    pub fn successes(&self) -> f64 {
        self.successes
    }

    pub fn is_binary(&self) -> bool {
        self.binary
    }

    pub fn estimate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes / self.trials as f64
        }
    }

    /// Standard error of [`estimate`](Self::estimate).
    pub fn std_error(&self) -> f64 {
        if self.trials < 2 {
            return 0.0;
        }
        let n = self.trials as f64;
        let mean = self.estimate();
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    pub fn ci95(&self) -> (f64, f64) {
        const Z: f64 = 1.959963984540054;
        if self.trials == 0 {
            return (0.0, 1.0);
        }
        if self.binary {
            wilson_interval(self.successes, self.trials as f64, Z)
        } else {
            let h = Z * self.std_error();
            ((self.estimate() - h).max(0.0), (self.estimate() + h).min(1.0))
        }
    }
}

/// Wilson score interval for `k` successes in `n` trials at `z` standard
/// deviations.
pub fn wilson_interval(k: f64, n: f64, z: f64) -> (f64, f64) {
    let p = k / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Runs `trials` independent trials in parallel, each on its own
/// [`trial_rng`] stream, and totals the scores in trial order so the result
/// does not depend on scheduling.
pub fn run_trials<F>(trials: u64, seed: u64, binary: bool, f: F) -> Result<GameStats>
where
    F: Fn(&mut ChaCha8Rng, u64) -> Result<f64> + Sync,
{
    let scores: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| f(&mut trial_rng(seed, i), i))
        .collect::<Result<_>>()?;
    Ok(GameStats::from_scores(scores, binary))
}

/// True when `count` successes out of `trials` lie within `z` binomial
/// standard deviations of `trials·p`.
pub fn within_binomial_sigma(count: f64, trials: f64, p: f64, z: f64) -> bool {
    let sigma = (trials * p * (1.0 - p)).sqrt();
    // a degenerate p makes any deviation a failure; allow round-off only
    (count - trials * p).abs() <= z * sigma + 1e-9 * trials
}

/// `2·exp(−2(ηt − k)²/t)`, the two-sided Hoeffding bound on the count of
/// `t` Bernoulli(η) trials falling below `k`.
pub fn hoeffding_bound(eta: f64, t: usize, k: usize) -> f64 {
    let gap = eta * t as f64 - k as f64;
    2.0 * (-2.0 * gap * gap / t as f64).exp()
}

/// `ln C(n, j)` via `ln Γ`-free summation of logs.
fn ln_choose(n: usize, j: usize) -> f64 {
    let j = j.min(n - j);
    (0..j).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// `P[Bin(n, p) ≥ k]`, summing the pmf in log space.
pub fn binomial_tail_ge(n: usize, p: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    // ratio recurrence pmf(j+1)/pmf(j) = (n−j)/(j+1) · p/q
    let mut log_pmf = ln_choose(n, k) + k as f64 * lp + (n - k) as f64 * lq;
    let mut total = 0.0;
    for j in k..=n {
        total += log_pmf.exp();
        if j < n {
            log_pmf += ((n - j) as f64).ln() - ((j + 1) as f64).ln() + lp - lq;
        }
    }
    total.min(1.0)
}

/// `P[Bin(n, p) < k]`, computed directly so it stays accurate when the upper
/// tail is close to 1.
pub fn binomial_cdf_lt(n: usize, p: f64, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if k > n {
        return 1.0;
    }
    binomial_tail_ge(n, 1.0 - p, n - k + 1)
}

/// Distribution of the number of successes among independent Bernoulli
/// trials with the given probabilities.
pub fn poisson_binomial_pmf(ps: &[f64]) -> Vec<f64> {
    let mut pmf = vec![0.0; ps.len() + 1];
    pmf[0] = 1.0;
    for (i, &p) in ps.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            pmf[j] = pmf[j] * (1.0 - p) + pmf[j - 1] * p;
        }
        pmf[0] *= 1.0 - p;
    }
    pmf
}

/// `P[Σ Bernoulli(p_i) ≥ k]`.
pub fn poisson_binomial_tail_ge(ps: &[f64], k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    poisson_binomial_pmf(ps).iter().skip(k).sum::<f64>().min(1.0)
}

/// `P[Σ Bernoulli(p_i) < k]`.
pub fn poisson_binomial_cdf_lt(ps: &[f64], k: usize) -> f64 {
    poisson_binomial_pmf(ps).iter().take(k).sum::<f64>().min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all `2^t` accept/reject patterns.
    fn tail_by_patterns(ps: &[f64], k: usize) -> f64 {
        (0u32..1 << ps.len())
            .filter(|m| m.count_ones() as usize >= k)
            .map(|m| ps.iter().enumerate().map(|(i, p)| if m >> i & 1 == 1 { *p } else { 1.0 - p }).product::<f64>())
            .sum()
    }

    #[test]
    fn poisson_binomial_matches_enumeration() {
        let ps = [0.1, 0.9, 0.5, 0.33, 0.7, 0.01, 0.99, 0.42];
        for k in 0..=ps.len() + 1 {
            let exact = poisson_binomial_tail_ge(&ps, k);
            assert!((exact - tail_by_patterns(&ps, k)).abs() < 1e-14, "k={k}");
            assert!((exact + poisson_binomial_cdf_lt(&ps, k) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn binomial_tail_matches_poisson_binomial() {
        for (n, p, k) in [(200, 0.28, 11), (20, 0.5, 10), (8, 0.7, 3), (50, 0.01, 2)] {
            let a = binomial_tail_ge(n, p, k);
            let b = poisson_binomial_tail_ge(&vec![p; n], k);
            assert!((a - b).abs() < 1e-12, "({n},{p},{k}): {a} vs {b}");
        }
        assert_eq!(binomial_tail_ge(5, 0.3, 0), 1.0);
        assert_eq!(binomial_tail_ge(5, 0.3, 6), 0.0);
    }

    #[test]
    fn hoeffding_dominates_exact_lower_tail() {
        let lower = binomial_cdf_lt(200, 0.28, 11);
        let h = hoeffding_bound(0.28, 200, 11);
        assert!((h - 2.0 * (-20.25f64).exp()).abs() < 1e-20);
        assert!(lower <= h);
        assert!(lower > 0.0);
    }

    #[test]
    fn wilson_contains_estimate() {
        let mut s = GameStats::binary();
        for i in 0..100 {
            s.record_bool(i % 4 == 0);
        }
        let (lo, hi) = s.ci95();
        assert!(lo < 0.25 && 0.25 < hi);
        assert_eq!(s.successes(), 25.0);
        let (lo, hi) = wilson_interval(0.0, 10.0, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
    }

    #[test]
    fn run_trials_is_deterministic() {
        use rand::Rng;
        let f = |rng: &mut ChaCha8Rng, _| Ok(rng.random::<f64>());
        let a = run_trials(500, 9, false, f).unwrap();
        let b = run_trials(500, 9, false, f).unwrap();
        assert_eq!(a, b);
        assert!((a.estimate() - 0.5).abs() < 4.0 * a.std_error());
    }
}
