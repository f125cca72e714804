//! State-preparation oracle worlds for black-box cloning experiments.
//!
//! A world holds `N` Haar-random states and a hidden index `J`. Strategies
//! see only a [`OracleSession`]: `k` copies of `|ψ_J⟩` and a query budget.
//! They are handed exact amplitude vectors for every state they hold, which
//! only strengthens them relative to the query model.

use num_complex::Complex64;
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::werner::{haar_state, werner_clone, werner_fidelity};
use crate::density::MAX_DENSITY_QUBITS;
use crate::error::{Error, Result};
use crate::State;

pub const MAX_ORACLE_QUBITS: usize = 8;

/// `2^{-n/4}(2T + k + 1)`.
pub fn blackbox_bound(n: usize, queries: usize, k: usize) -> f64 {
    (-(n as f64) / 4.0).exp2() * (2 * queries + k + 1) as f64
}

#[derive(Debug, Clone)]
pub struct OracleWorld {
    n: usize,
    states: Vec<State>,
    hidden: usize,
}

impl OracleWorld {
    pub fn sample<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n > MAX_ORACLE_QUBITS {
            return Err(Error::TooLarge { what: "oracle world", qubits: n, cap: MAX_ORACLE_QUBITS });
        }
        if size == 0 || size > 1 << n {
            return Err(Error::InvalidParams(format!("oracle index count {size} must lie in 1..=2^{n}")));
        }
        let states = (0..size).map(|_| haar_state(n, rng)).collect();
        let hidden = rng.random_range(0..size);
        Ok(Self { n, states, hidden })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.states.len()
    }

    /// `U_i` on an arbitrary register: a phase times the Householder
    /// reflection exchanging `|0⟩` and `|ψ_i⟩`, so `U_i|0⟩ = |ψ_i⟩` and the
    /// rest of the basis is extended arbitrarily but fixed.
    fn apply(&self, i: usize, target: &mut State) -> Result<()> {
        let psi = &self.states[i];
        if target.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: target.n_qubits() });
        }
        let a0 = psi.amplitudes()[0];
        let phase = if a0.norm() > 0.0 { a0 / a0.norm() } else { Complex64::new(1.0, 0.0) };
        let mut w: Vec<Complex64> = psi.amplitudes().iter().map(|&a| -a / phase).collect();
        w[0] += 1.0;
        let wn: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        let mut amps = target.amplitudes().to_vec();
        if wn > 1e-24 {
            let proj: Complex64 = w.iter().zip(&amps).map(|(wi, a)| wi.conj() * a).sum();
            let coeff = proj * 2.0 / wn;
            for (a, wi) in amps.iter_mut().zip(&w) {
                *a -= coeff * wi;
            }
        }
        amps.iter_mut().for_each(|a| *a *= phase);
        *target = State::from_amplitudes(amps)?;
        Ok(())
    }
}

/// What a strategy sees during one run.
pub struct OracleSession<'w> {
    world: &'w OracleWorld,
    copies: Vec<State>,
    budget: usize,
    used: usize,
}

impl<'w> OracleSession<'w> {
    pub fn n_qubits(&self) -> usize {
        self.world.n
    }

    pub fn size(&self) -> usize {
        self.world.size()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn queries_used(&self) -> usize {
        self.used
    }

    pub fn copies(&self) -> &[State] {
        &self.copies
    }

    pub fn take_copies(&mut self) -> Vec<State> {
        std::mem::take(&mut self.copies)
    }

    /// One oracle call on `|i⟩|target⟩` with a classical index register.
    pub fn apply_oracle(&mut self, i: usize, target: &mut State) -> Result<()> {
        if self.used >= self.budget {
            return Err(Error::QueryBudgetExhausted(self.budget));
        }
        if i >= self.world.size() {
            return Err(Error::InvalidParams(format!("oracle index {i} out of range")));
        }
        self.used += 1;
        self.world.apply(i, target)
    }

    /// `O|i⟩|0ⁿ⟩`, returning `|ψ_i⟩`.
    pub fn query(&mut self, i: usize) -> Result<State> {
        let mut s = State::zero(self.world.n);
        self.apply_oracle(i, &mut s)?;
        Ok(s)
    }
}

/// A candidate for `|ψ_J⟩^{⊗k+1}`.
#[derive(Debug, Clone)]
pub enum CloneOutput {
    /// `⊗_m |φ_m⟩`, one `n`-qubit factor per output copy.
    Product(Vec<State>),
    /// The symmetric-subspace cloner applied to the session's `k` copies.
    Werner,
}

pub trait QueryStrategy {
    fn name(&self) -> String;
    fn budget(&self) -> usize;
    fn run(&self, session: &mut OracleSession<'_>, rng: &mut dyn rand::RngCore) -> Result<CloneOutput>;
}

/// Makes no queries and runs the optimal universal cloner.
#[derive(Debug, Clone, Copy)]
pub struct WernerStrategy;

impl QueryStrategy for WernerStrategy {
    fn name(&self) -> String {
        "werner".into()
    }

    fn budget(&self) -> usize {
        0
    }

    fn run(&self, _session: &mut OracleSession<'_>, _rng: &mut dyn rand::RngCore) -> Result<CloneOutput> {
        Ok(CloneOutput::Werner)
    }
}

/// Queries `queries` distinct random indices and appends the returned state
/// closest to the input copies.
#[derive(Debug, Clone, Copy)]
pub struct RandomQueryStrategy {
    pub queries: usize,
}

/// Queries every index; finds `J` exactly.
#[derive(Debug, Clone, Copy)]
pub struct ExhaustiveStrategy {
    pub size: usize,
}

fn best_match(session: &mut OracleSession<'_>, indices: impl IntoIterator<Item = usize>) -> Result<CloneOutput> {
    let reference = session.copies().first().cloned().ok_or(Error::InsufficientSamples { required: 1, got: 0 })?;
    let mut best: Option<(f64, State)> = None;
    for i in indices {
        let s = session.query(i)?;
        let f = s.overlap(&reference)?;
        if best.as_ref().is_none_or(|(b, _)| f > *b) {
            best = Some((f, s));
        }
    }
    let mut out = session.take_copies();
    out.push(match best {
        Some((_, s)) => s,
        None => State::zero(session.n_qubits()),
    });
    Ok(CloneOutput::Product(out))
}

impl QueryStrategy for RandomQueryStrategy {
    fn name(&self) -> String {
        format!("random-query(T={})", self.queries)
    }

    fn budget(&self) -> usize {
        self.queries
    }

    fn run(&self, session: &mut OracleSession<'_>, rng: &mut dyn rand::RngCore) -> Result<CloneOutput> {
        let picks = sample_indices(rng, session.size(), self.queries.min(session.size()));
        best_match(session, picks)
    }
}

impl QueryStrategy for ExhaustiveStrategy {
    fn name(&self) -> String {
        "exhaustive".into()
    }

    fn budget(&self) -> usize {
        self.size
    }

    fn run(&self, session: &mut OracleSession<'_>, _rng: &mut dyn rand::RngCore) -> Result<CloneOutput> {
        let size = session.size();
        best_match(session, 0..size)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub strategy: String,
    pub n: usize,
    pub size: usize,
    pub k: usize,
    pub queries: usize,
    pub fidelity: f64,
    pub bound: f64,
}

/// Runs `strategy` with `k` copies of `|ψ_J⟩` and scores its output against
/// `|ψ_J⟩^{⊗k+1}`.
pub fn oracle_world_run<S: QueryStrategy + ?Sized>(
    world: &OracleWorld,
    strategy: &S,
    k: usize,
    rng: &mut dyn rand::RngCore,
) -> Result<OracleOutcome> {
    let target = &world.states[world.hidden];
    let mut session = OracleSession { world, copies: vec![target.clone(); k], budget: strategy.budget(), used: 0 };
    let output = strategy.run(&mut session, rng)?;
    let fidelity = match output {
        CloneOutput::Product(parts) => {
            if parts.len() != k + 1 {
                return Err(Error::BlockCountMismatch { expected: k + 1, got: parts.len() });
            }
            parts.iter().try_fold(1.0, |acc, p| Ok::<_, Error>(acc * p.overlap(target)?))?
        }
        // the cloner's fidelity is input-independent; simulate when it fits
        CloneOutput::Werner if world.n * (k + 1) <= MAX_DENSITY_QUBITS => werner_clone(target, k)?.fidelity(),
        CloneOutput::Werner => werner_fidelity(world.n, k),
    };
    Ok(OracleOutcome {
        strategy: strategy.name(),
        n: world.n,
        size: world.size(),
        k,
        queries: session.used,
        fidelity,
        bound: blackbox_bound(world.n, session.used, k),
    })
}
