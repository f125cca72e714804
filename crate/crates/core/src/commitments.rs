//! Random-circuit bit commitments on a fully enumerated ensemble.
//!
//! For an ensemble `{C}` of size `M`, committing to `b` prepares
//!
//! ```text
//! |ψ_0⟩ = M^{-1/2} Σ_C |C⟩^{⊗k} |0ⁿ⟩ ⊗ |Ĉ⟩
//! |ψ_1⟩ = M^{-1/2} Σ_C |C⟩^{⊗(k+1)} ⊗ |Ĉ⟩
//! ```
//!
//! Qubit layout: register A (`(k+1)·n` qubits, block `j` on qubits
//! `j·n..(j+1)·n`) is lowest, then register B (`ceil(log₂ M)` qubits holding
//! the ensemble index), then any adversary ancillas.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::circuits::{enumerate_ensemble, CircuitDescription, EnsembleParams};
use crate::density::DensityOperator;
use crate::error::{Error, Result};
use crate::statevec::GateOp;
use crate::stats::{run_trials, GameStats};
use crate::{Density, State};

/// Largest joint state, in amplitudes.
pub const MAX_JOINT_AMPLITUDES: usize = 1 << 24;
/// Largest ensemble for which register-B operators are built.
pub const MAX_HIDING_ENSEMBLE: usize = 256;

fn ceil_log2(m: usize) -> usize {
    if m <= 1 {
        0
    } else {
        (usize::BITS - (m - 1).leading_zeros()) as usize
    }
}

/// An enumerated ensemble with its output states and the copy parameter `k`.
#[derive(Debug, Clone)]
pub struct CommitmentSetup {
    n: usize,
    k: usize,
    circuits: Vec<CircuitDescription>,
    states: Vec<State>,
}

impl CommitmentSetup {
    pub fn new(n: usize, k: usize, circuits: Vec<CircuitDescription>) -> Result<Self> {
        if circuits.is_empty() {
            return Err(Error::InvalidParams("commitment ensemble is empty".into()));
        }
        if let Some(c) = circuits.iter().find(|c| c.n() != n) {
            return Err(Error::DimensionMismatch { left: n, right: c.n() });
        }
        let states = circuits.iter().map(|c| c.prepare_state()).collect();
        Ok(Self { n, k, circuits, states })
    }

    /// Enumerates the ensemble of `params`.
    pub fn from_params(params: EnsembleParams, k: usize, cap: usize) -> Result<Self> {
        Self::new(params.n, k, enumerate_ensemble(params, cap)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        self.circuits.len()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn a_qubits(&self) -> usize {
        (self.k + 1) * self.n
    }

    pub fn b_qubits(&self) -> usize {
        ceil_log2(self.size())
    }

    pub fn joint_qubits(&self) -> usize {
        self.a_qubits() + self.b_qubits()
    }

    fn check_budget(&self, ancillas: usize) -> Result<()> {
        let qubits = self.joint_qubits() + ancillas;
        if qubits >= usize::BITS as usize || 1usize << qubits > MAX_JOINT_AMPLITUDES {
            return Err(Error::TooLarge { what: "commitment state", qubits, cap: MAX_JOINT_AMPLITUDES.trailing_zeros() as usize });
        }
        Ok(())
    }

    /// Register-A contents of branch `c`: `|C⟩^{⊗k}` then `|0ⁿ⟩` or `|C⟩`.
    fn branch(&self, c: usize, bit: bool) -> State {
        let mut a = self.states[c].tensor_power(self.k);
        a = if bit { a.tensor(&self.states[c]) } else { a.tensor(&State::zero(self.n)) };
        a
    }
}

/// The committer's joint state for one bit.
#[derive(Debug, Clone)]
pub struct CommitmentState {
    pub bit: bool,
    pub joint: State,
}

pub fn commit(setup: &CommitmentSetup, bit: bool) -> Result<CommitmentState> {
    setup.check_budget(0)?;
    let a_dim = 1usize << setup.a_qubits();
    let scale = 1.0 / (setup.size() as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); a_dim << setup.b_qubits()];
    for c in 0..setup.size() {
        let branch = setup.branch(c, bit);
        for (i, a) in branch.amplitudes().iter().enumerate() {
            amps[(c * a_dim) | i] = a * scale;
        }
    }
    Ok(CommitmentState { bit, joint: State::from_amplitudes(amps)? })
}

impl CommitmentState {
    /// Reduced operator on register B, by partial trace.
    pub fn register_b(&self, setup: &CommitmentSetup) -> Result<Density> {
        let b: Vec<usize> = (setup.a_qubits()..setup.joint_qubits()).collect();
        if b.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        self.joint.reduced_density(&b)
    }
}

/// `ρ_b[c][c'] = M⁻¹·⟨C'|C⟩^{k+b}` in the ensemble-index basis.
pub fn register_b_closed_form(setup: &CommitmentSetup, bit: bool) -> Result<Density> {
    let m = setup.size();
    if m > MAX_HIDING_ENSEMBLE {
        return Err(Error::TooLarge { what: "register B operator", qubits: setup.b_qubits(), cap: 8 });
    }
    let bq = setup.b_qubits();
    let dim = 1usize << bq;
    let power = setup.k + bit as usize;
    let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..m {
        for c in 0..m {
            let ov = setup.states[c].inner(&setup.states[r])?;
            mat[r * dim + c] = ov.powu(power as u32) / m as f64;
        }
    }
    DensityOperator::from_matrix(bq, mat)
}

/// `|M⁻¹ Σ_C ⟨C|0ⁿ⟩|²`.
pub fn correctness_overlap(setup: &CommitmentSetup) -> f64 {
    let sum: Complex64 = setup.states.iter().map(|s| s.amplitudes()[0].conj()).sum();
    (sum / setup.size() as f64).norm_sqr()
}

/// `|⟨ψ_0|ψ_1⟩|²` from the two constructed joint states.
pub fn correctness_overlap_direct(setup: &CommitmentSetup) -> Result<f64> {
    commit(setup, false)?.joint.overlap(&commit(setup, true)?.joint)
}

/// `F(ρ_0, ρ_1)` between the register-B operators.
pub fn hiding_fidelity(setup: &CommitmentSetup) -> Result<f64> {
    register_b_closed_form(setup, false)?.fidelity(&register_b_closed_form(setup, true)?)
}

/// Probability that uncomputing the bit-`claimed` constructor on `state`
/// returns all zeros, i.e. `|⟨ψ_claimed|state⟩|²`.
pub fn reveal_verify(setup: &CommitmentSetup, state: &State, claimed: bool) -> Result<f64> {
    commit(setup, claimed)?.joint.overlap(state)
}

/// Gate access to register A and the ancillas of a joint state. Gates that
/// touch register B are refused.
pub struct RegisterA<'a> {
    state: &'a mut State,
    a_qubits: usize,
    b_qubits: usize,
}

impl<'a> RegisterA<'a> {
    pub fn a_qubits(&self) -> usize {
        self.a_qubits
    }

    /// Qubit index of ancilla `i`.
    pub fn ancilla(&self, i: usize) -> usize {
        self.a_qubits + self.b_qubits + i
    }

    pub fn apply(&mut self, gate: &GateOp<f64>) -> Result<()> {
        let b = self.a_qubits..self.a_qubits + self.b_qubits;
        if let Some(q) = gate.targets().iter().find(|q| b.contains(q)) {
            return Err(Error::RegisterViolation(format!("gate `{}` touches register B qubit {q}", gate.label())));
        }
        self.state.apply(gate)
    }
}

/// A binding attacker: holds register A of `|ψ_1⟩` and tries to make the
/// joint state look like `|ψ_0⟩`.
pub trait BindingAdversary: Sync {
    fn ancillas(&self, setup: &CommitmentSetup) -> usize;
    fn act(&self, reg: &mut RegisterA<'_>, setup: &CommitmentSetup, rng: &mut ChaCha8Rng) -> Result<()>;
}

/// Does nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityAdversary;

impl BindingAdversary for IdentityAdversary {
    fn ancillas(&self, _: &CommitmentSetup) -> usize {
        0
    }

    fn act(&self, _: &mut RegisterA<'_>, _: &CommitmentSetup, _: &mut ChaCha8Rng) -> Result<()> {
        Ok(())
    }
}

/// Swaps the last A block into `n` fresh ancillas, leaving `|0ⁿ⟩` behind.
/// Exact score: `M⁻² Σ_{C,C'} ⟨C'|C⟩`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SwapOutAdversary;

impl BindingAdversary for SwapOutAdversary {
    fn ancillas(&self, setup: &CommitmentSetup) -> usize {
        setup.n()
    }

    fn act(&self, reg: &mut RegisterA<'_>, setup: &CommitmentSetup, _: &mut ChaCha8Rng) -> Result<()> {
        let last = setup.k() * setup.n();
        for i in 0..setup.n() {
            let anc = reg.ancilla(i);
            reg.apply(&GateOp::pair("SWAP", last + i, anc, crate::statevec::gates::swap())?)?;
        }
        Ok(())
    }
}

/// `‖(⟨ψ_0| ⊗ I_anc)|φ⟩‖²` for a joint state `φ` with `ancillas` extra
/// qubits above register B.
pub fn binding_score(setup: &CommitmentSetup, phi: &State, ancillas: usize) -> Result<f64> {
    let psi0 = commit(setup, false)?.joint;
    let block = psi0.dim();
    if phi.dim() != block << ancillas {
        return Err(Error::DimensionMismatch { left: psi0.n_qubits() + ancillas, right: phi.n_qubits() });
    }
    Ok(phi
        .amplitudes()
        .chunks(block)
        .map(|chunk| chunk.iter().zip(psi0.amplitudes()).map(|(x, y)| y.conj() * x).sum::<Complex64>().norm_sqr())
        .sum())
}

/// Mean binding score over `trials` runs of the adversary on `|ψ_1⟩`.
pub fn binding_game<A: BindingAdversary + ?Sized>(adversary: &A, setup: &CommitmentSetup, trials: u64, seed: u64) -> Result<GameStats> {
    let anc = adversary.ancillas(setup);
    setup.check_budget(anc)?;
    let psi1 = commit(setup, true)?.joint;
    run_trials(trials, seed, false, |rng, _| {
        let mut phi = psi1.tensor(&State::zero(anc));
        let mut reg = RegisterA { state: &mut phi, a_qubits: setup.a_qubits(), b_qubits: setup.b_qubits() };
        adversary.act(&mut reg, setup, rng)?;
        Ok(binding_score(setup, &phi, anc)?.min(1.0))
    })
}
