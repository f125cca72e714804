//! Classical shadows with random Clifford measurements.
//!
//! Observables are rank-1 projectors `|φ⟩⟨φ|`, so `Tr(A ρ̂)` reduces to
//! `(2ⁿ + 1)|⟨φ|S†|x⟩|² − 1` and no matrix is ever formed.

use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::clifford::{sample_clifford, Clifford};
use crate::circuits::CircuitDescription;
use crate::error::{Error, Result};
use crate::State;

/// Sample-count constant of the median-of-means guarantee.
pub const SHADOW_CONSTANT: f64 = 204.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shadow {
    pub clifford: Clifford,
    pub outcome: usize,
}

impl Shadow {
    pub fn n_qubits(&self) -> usize {
        self.clifford.n_qubits()
    }

    /// `S†|x⟩`.
    pub fn snapshot(&self) -> State {
        self.clifford.inverse_on_basis(self.outcome)
    }

    /// `Tr(|φ⟩⟨φ| ρ̂)`.
    pub fn value(&self, phi: &State) -> Result<f64> {
        value_from_snapshot(&self.snapshot(), phi)
    }
}

fn value_from_snapshot(snapshot: &State, phi: &State) -> Result<f64> {
    let dim = snapshot.dim() as f64;
    Ok((dim + 1.0) * phi.overlap(snapshot)? - 1.0)
}

/// Applies a fresh random Clifford to `copy` and measures it.
pub fn measure_shadow<R: Rng + ?Sized>(copy: &State, rng: &mut R) -> Result<Shadow> {
    let clifford = sample_clifford(copy.n_qubits(), rng)?;
    let mut s = copy.clone();
    clifford.apply_to(&mut s)?;
    let outcome = s.measure_all(rng);
    Ok(Shadow { clifford, outcome })
}

pub fn collect_shadows<R: Rng + ?Sized>(copies: &[State], rng: &mut R) -> Result<Vec<Shadow>> {
    copies.iter().map(|c| measure_shadow(c, rng)).collect()
}

/// `B = max_i Tr((A_i − 2⁻ⁿ Tr(A_i) I)²)`, which is `1 − 2⁻ⁿ` for every
/// rank-1 projector.
pub fn projector_b(n: usize) -> f64 {
    1.0 - (-(n as f64)).exp2()
}

/// Smallest group count `⌈2 ln(2M/δ)⌉`.
pub fn default_groups(observables: usize, delta: f64) -> usize {
    (2.0 * (2.0 * observables as f64 / delta).ln()).ceil().max(1.0) as usize
}

/// Smallest `k` with `k ≥ (204/ε²)·ln(2M/δ)·B`.
pub fn required_samples(eps: f64, delta: f64, observables: usize, b: f64) -> usize {
    (SHADOW_CONSTANT / (eps * eps) * (2.0 * observables as f64 / delta).ln() * b).ceil() as usize
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Median over `groups` equal blocks of per-block means. Trailing shadows
/// that do not fill a block are dropped, at most `groups − 1` of them.
pub fn shadow_estimate(shadows: &[Shadow], observables: &[State], groups: usize) -> Result<Vec<f64>> {
    if shadows.is_empty() {
        return Err(Error::Shadows("no shadows".into()));
    }
    if groups == 0 || groups > shadows.len() {
        return Err(Error::Shadows(format!("{groups} groups for {} shadows", shadows.len())));
    }
    let per_group = shadows.len() / groups;
    let snapshots: Vec<State> = shadows[..per_group * groups].par_iter().map(Shadow::snapshot).collect();
    observables
        .par_iter()
        .map(|phi| {
            let mut means = Vec::with_capacity(groups);
            for chunk in snapshots.chunks(per_group) {
                let mut sum = 0.0;
                for s in chunk {
                    sum += value_from_snapshot(s, phi)?;
                }
                means.push(sum / per_group as f64);
            }
            Ok(median(means))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowLearnerReport {
    pub samples: usize,
    pub groups: usize,
    pub qualifying: usize,
    pub index: usize,
    pub estimate: f64,
}

/// Runs the protocol on `copies` with the ensemble's output projectors as
/// observables and returns a random member whose estimate is at least
/// `1 − eps`.
pub fn shadow_learner<R: Rng + ?Sized>(
    copies: &[State],
    ensemble: &[CircuitDescription],
    eps: f64,
    delta: f64,
    rng: &mut R,
) -> Result<(CircuitDescription, ShadowLearnerReport)> {
    if ensemble.is_empty() {
        return Err(Error::Shadows("empty ensemble".into()));
    }
    if !(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(Error::Shadows(format!("eps={eps}, delta={delta} must lie in (0, 1)")));
    }
    let n = copies.first().ok_or(Error::InsufficientSamples { required: 1, got: 0 })?.n_qubits();
    let required = required_samples(eps, delta, ensemble.len(), projector_b(n));
    if copies.len() < required {
        return Err(Error::InsufficientSamples { required, got: copies.len() });
    }
    let groups = default_groups(ensemble.len(), delta);
    let shadows = collect_shadows(copies, rng)?;
    let observables: Vec<State> = ensemble.par_iter().map(|c| c.prepare_state()).collect();
    let estimates = shadow_estimate(&shadows, &observables, groups)?;
    let qualifying: Vec<usize> = (0..ensemble.len()).filter(|&i| estimates[i] >= 1.0 - eps).collect();
    let &index = qualifying
        .choose(rng)
        .ok_or_else(|| Error::Shadows(format!("no estimate reached {}", 1.0 - eps)))?;
    let report = ShadowLearnerReport {
        samples: copies.len(),
        groups,
        qualifying: qualifying.len(),
        index,
        estimate: estimates[index],
    };
    Ok((ensemble[index].clone(), report))
}
