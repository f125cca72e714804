//! Learning and cloning baselines.
//!
//! None of these run in polynomial time on realistic sizes; they are
//! reference points that the security experiments are measured against.

pub mod clifford;
pub mod oracle;
pub mod shadows;
pub mod werner;

use serde::{Deserialize, Serialize};

use crate::circuits::CircuitDescription;
use crate::error::{Error, Result};
use crate::State;

pub use clifford::{sample_clifford, Clifford, CliffordGate, PauliString, Tableau};
pub use oracle::{
    blackbox_bound, oracle_world_run, CloneOutput, ExhaustiveStrategy, OracleOutcome, OracleSession, OracleWorld,
    QueryStrategy, RandomQueryStrategy, WernerStrategy,
};
pub use shadows::{shadow_estimate, shadow_learner, Shadow, ShadowLearnerReport};
pub use werner::{haar_state, werner_clone, werner_fidelity, WernerClone};

/// `argmax_D |⟨D|ψ⟩|²` over `ensemble`, lowest index on ties.
pub fn brute_force_learner(psi: &State, ensemble: &[CircuitDescription]) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in ensemble.iter().enumerate() {
        let f = c.prepare_state::<f64>().overlap(psi)?;
        if best.is_none_or(|(_, b)| f > b + 1e-12) {
            best = Some((i, f));
        }
    }
    best.ok_or_else(|| Error::Shadows("empty ensemble".into()))
}

/// One row of an attack benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub attack: String,
    pub n: usize,
    pub samples: usize,
    pub runtime_ms: f64,
    pub fidelity: f64,
    pub bound: Option<f64>,
}
