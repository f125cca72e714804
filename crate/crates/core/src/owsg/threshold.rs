//! Threshold repetition: `t` independent instances, accepting when at least
//! `k` of them verify.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ver_exact, ver_sampled, OwsgKey, QState};
use crate::error::{Error, Result};
use crate::stats::poisson_binomial_tail_ge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub t: usize,
    pub k: usize,
    pub n: usize,
}

impl ThresholdParams {
    pub fn new(t: usize, k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > t {
            return Err(Error::InvalidThreshold(format!("need 1 <= k <= t, got k={k}, t={t}")));
        }
        Ok(Self { t, k, n })
    }

    /// `k = t`: every block must verify.
    pub fn parallel(t: usize, n: usize) -> Result<Self> {
        Self::new(t, t, n)
    }
}

/// `floor((η − √(n/2t))·t)`, at least 1.
///
/// A `1e-9` slack absorbs round-off so exact products such as `0.4·800` floor
/// to 320 rather than 319.
pub fn threshold_k(eta: f64, t: usize, n: usize) -> Result<usize> {
    if !(eta > 0.0 && eta <= 1.0) || t == 0 {
        return Err(Error::InvalidThreshold(format!("need 0 < eta <= 1 and t >= 1, got eta={eta}, t={t}")));
    }
    let raw = (eta - (n as f64 / (2.0 * t as f64)).sqrt()) * t as f64;
    if raw <= 0.0 {
        return Err(Error::ThresholdNonPositive { eta, t, n });
    }
    Ok(((raw + 1e-9).floor() as usize).clamp(1, t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdVerdict {
    /// Exact per-block acceptance probabilities, or 0/1 outcomes when sampled.
    pub per_block: Vec<f64>,
    pub count: usize,
    pub k: usize,
    /// Exact mode: `P[#accepting blocks ≥ k]`. Sampled mode: 0 or 1.
    pub accept_prob: f64,
    pub accept: bool,
}

fn check_blocks(keys: &[OwsgKey], blocks: &[QState], params: &ThresholdParams) -> Result<()> {
    for got in [keys.len(), blocks.len()] {
        if got != params.t {
            return Err(Error::BlockCountMismatch { expected: params.t, got });
        }
    }
    Ok(())
}

/// Exact acceptance probability. `count` is the number of blocks that verify
/// with certainty, and the verdict is acceptance with probability at least ½.
pub fn ver_threshold_exact(keys: &[OwsgKey], blocks: &[QState], params: &ThresholdParams) -> Result<ThresholdVerdict> {
    check_blocks(keys, blocks, params)?;
    let per_block: Vec<f64> = keys.iter().zip(blocks).map(|(k, b)| ver_exact(k, b)).collect::<Result<_>>()?;
    let accept_prob = poisson_binomial_tail_ge(&per_block, params.k);
    let count = per_block.iter().filter(|&&p| p >= 1.0 - 1e-10).count();
    Ok(ThresholdVerdict { per_block, count, k: params.k, accept_prob, accept: accept_prob >= 0.5 })
}

pub fn ver_threshold_sampled<R: Rng + ?Sized>(
    keys: &[OwsgKey],
    blocks: &[QState],
    params: &ThresholdParams,
    rng: &mut R,
) -> Result<ThresholdVerdict> {
    check_blocks(keys, blocks, params)?;
    let per_block: Vec<f64> = keys
        .iter()
        .zip(blocks)
        .map(|(k, b)| ver_sampled(k, b, rng).map(|ok| if ok { 1.0 } else { 0.0 }))
        .collect::<Result<_>>()?;
    let count = per_block.iter().filter(|&&x| x == 1.0).count();
    let accept = count >= params.k;
    Ok(ThresholdVerdict { per_block, count, k: params.k, accept_prob: if accept { 1.0 } else { 0.0 }, accept })
}
