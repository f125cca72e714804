//! Gate-level depolarizing noise, global white noise, and the closed-form
//! fidelity estimates that connect them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::CircuitDescription;
use crate::density::DensityOperator;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::statevec::gates::pauli;
use crate::statevec::{GateOp, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseKind {
    None,
    /// Single-qubit depolarizing channel of strength `eps` on both qubits
    /// after every brick.
    Depolarizing { eps: f64 },
    /// Output `F·ρ + (1−F)·I/2ⁿ`.
    White { fidelity: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    /// Per-gate decay constant in `η = exp(−c·n·d)`, if calibrated.
    pub c: Option<f64>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::none()
    }
}

fn unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidNoise(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

impl NoiseModel {
    pub fn none() -> Self {
        Self { kind: NoiseKind::None, c: None }
    }

    pub fn depolarizing(eps: f64) -> Result<Self> {
        let m = Self { kind: NoiseKind::Depolarizing { eps }, c: None };
        m.validate()?;
        Ok(m)
    }

    pub fn white(fidelity: f64) -> Result<Self> {
        let m = Self { kind: NoiseKind::White { fidelity }, c: None };
        m.validate()?;
        Ok(m)
    }

    pub fn with_c(mut self, c: f64) -> Result<Self> {
        self.c = Some(c);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            NoiseKind::None => {}
            NoiseKind::Depolarizing { eps } => unit_interval("eps", eps)?,
            NoiseKind::White { fidelity } => unit_interval("F", fidelity)?,
        }
        if let Some(c) = self.c {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::InvalidNoise(format!("c = {c} must be finite and nonnegative")));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        match self.kind {
            NoiseKind::None => true,
            NoiseKind::Depolarizing { eps } => eps == 0.0,
            NoiseKind::White { fidelity } => fidelity == 1.0,
        }
    }

    /// Global fidelity under the white-noise heuristic for a circuit of
    /// `bricks` gates.
    pub fn heuristic_fidelity(&self, bricks: usize) -> f64 {
        match self.kind {
            NoiseKind::None => 1.0,
            NoiseKind::Depolarizing { eps } => analytic_fidelity(bricks, eps),
            NoiseKind::White { fidelity } => fidelity,
        }
    }
}

/// `(1 − eps)^{2s}` for `s` two-qubit gates.
pub fn analytic_fidelity(s: usize, eps: f64) -> f64 {
    (1.0 - eps).powf(2.0 * s as f64)
}

/// `exp(−c·n·d)`.
pub fn eta(n: usize, d: usize, c: f64) -> f64 {
    (-c * n as f64 * d as f64).exp()
}

/// `F·ρ + (1 − F)·I/2ⁿ`.
pub fn white_noise_state<T: Real>(ideal: &DensityOperator<T>, fidelity: T) -> Result<DensityOperator<T>> {
    unit_interval("F", fidelity.as_f64())?;
    Ok(ideal.mix_with_identity(fidelity))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimMode {
    ExactDensity,
    Trajectory,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoisyOutput<T> {
    Density(DensityOperator<T>),
    Sample(StateVector<T>),
}

impl<T: Real> NoisyOutput<T> {
    /// `⟨ψ|ρ|ψ⟩` or `|⟨ψ|φ⟩|²`.
    pub fn fidelity_with(&self, psi: &StateVector<T>) -> Result<T> {
        match self {
            NoisyOutput::Density(rho) => rho.expectation(psi),
            NoisyOutput::Sample(phi) => psi.overlap(phi),
        }
    }
}

/// Runs `c` on `|0ⁿ⟩` under `model`.
///
/// Exact mode returns the output density operator (n ≤ 12). Trajectory mode
/// returns one pure state whose ensemble average over the RNG is that
/// operator.
pub fn apply_noisy_circuit<T: Real, R: Rng + ?Sized>(
    c: &CircuitDescription,
    model: &NoiseModel,
    mode: SimMode,
    rng: &mut R,
) -> Result<NoisyOutput<T>> {
    model.validate()?;
    let n = c.n();
    match (mode, model.kind) {
        (SimMode::ExactDensity, NoiseKind::Depolarizing { eps }) => {
            let mut rho = DensityOperator::from_pure(&StateVector::zero(n))?;
            let eps = T::of(eps);
            for g in c.gates::<T>() {
                rho.apply(&g)?;
                for &q in g.targets() {
                    rho.depolarize(q, eps)?;
                }
            }
            Ok(NoisyOutput::Density(rho))
        }
        (SimMode::ExactDensity, kind) => {
            let ideal = DensityOperator::from_pure(&c.prepare_state::<T>())?;
            Ok(NoisyOutput::Density(match kind {
                NoiseKind::White { fidelity } => white_noise_state(&ideal, T::of(fidelity))?,
                _ => ideal,
            }))
        }
        (SimMode::Trajectory, NoiseKind::Depolarizing { eps }) => {
            let paulis: Vec<_> = (1..4).map(pauli::<T>).collect();
            let mut s = StateVector::zero(n);
            for g in c.gates::<T>() {
                s.apply(&g)?;
                for &q in g.targets() {
                    if rng.random::<f64>() < eps {
                        let p = paulis[rng.random_range(0..3)];
                        s.apply(&GateOp::single("P", q, p)?)?;
                    }
                }
            }
            Ok(NoisyOutput::Sample(s))
        }
        (SimMode::Trajectory, NoiseKind::White { fidelity }) => {
            // the mixture F|C⟩⟨C| + (1−F)·I/2ⁿ, sampled component-wise
            if rng.random::<f64>() < fidelity {
                Ok(NoisyOutput::Sample(c.prepare_state()))
            } else {
                Ok(NoisyOutput::Sample(StateVector::basis(n, rng.random_range(0..1usize << n))))
            }
        }
        (SimMode::Trajectory, NoiseKind::None) => Ok(NoisyOutput::Sample(c.prepare_state())),
    }
}
