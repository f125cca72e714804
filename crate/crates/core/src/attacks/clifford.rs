//! Uniform random Cliffords.
//!
//! Sampling sweeps one anticommuting Pauli pair per qubit down to
//! `(X_i, Z_i)` and prepends a uniformly random Pauli to fix signs, which is
//! uniform over the Clifford group modulo global phase. The result carries
//! both the gate list and the stabilizer tableau it induces.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::statevec::gates::{adjoint_s, cnot, hadamard, pauli_x, pauli_z, phase_s, swap};
use crate::statevec::{GateOp, StateVector};

pub const MAX_CLIFFORD_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Z(usize),
    /// Control first.
    Cnot(usize, usize),
    Swap(usize, usize),
}

impl CliffordGate {
    pub fn inverse(self) -> Self {
        match self {
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            g => g,
        }
    }

    fn max_qubit(self) -> usize {
        match self {
            CliffordGate::H(q) | CliffordGate::S(q) | CliffordGate::Sdg(q) | CliffordGate::X(q) | CliffordGate::Z(q) => q,
            CliffordGate::Cnot(a, b) | CliffordGate::Swap(a, b) => a.max(b),
        }
    }

    pub fn to_gate_op<T: Real>(self) -> GateOp<T> {
        let op = match self {
            CliffordGate::H(q) => GateOp::single("H", q, hadamard()),
            CliffordGate::S(q) => GateOp::single("S", q, phase_s()),
            CliffordGate::Sdg(q) => GateOp::single("Sdg", q, adjoint_s()),
            CliffordGate::X(q) => GateOp::single("X", q, pauli_x()),
            CliffordGate::Z(q) => GateOp::single("Z", q, pauli_z()),
            CliffordGate::Cnot(c, t) => GateOp::pair("CNOT", c, t, cnot()),
            CliffordGate::Swap(a, b) => GateOp::pair("SWAP", a, b, swap()),
        };
        op.expect("clifford gates are unitary with distinct targets")
    }
}

/// `(-1)^sign · ⊗_j X^{x_j} Z^{z_j}` with `Y` written as `(x, z) = (1, 1)`
/// carrying its `i` implicitly, as in the Aaronson–Gottesman convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
    pub sign: bool,
}

impl PauliString {
    pub fn x_on(q: usize) -> Self {
        Self { x: 1 << q, z: 0, sign: false }
    }

    pub fn z_on(q: usize) -> Self {
        Self { x: 0, z: 1 << q, sign: false }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn anticommutes(&self, other: &Self) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 1
    }

    /// Conjugates by `gate`: `P ← G P G†`.
    pub fn conjugate(&mut self, gate: CliffordGate) {
        let bit = |v: u64, q: usize| (v >> q) & 1 == 1;
        match gate {
            CliffordGate::H(a) => {
                self.sign ^= bit(self.x, a) && bit(self.z, a);
                let (xa, za) = (bit(self.x, a), bit(self.z, a));
                self.x = (self.x & !(1 << a)) | ((za as u64) << a);
                self.z = (self.z & !(1 << a)) | ((xa as u64) << a);
            }
            CliffordGate::S(a) => {
                self.sign ^= bit(self.x, a) && bit(self.z, a);
                self.z ^= self.x & (1 << a);
            }
            CliffordGate::Sdg(a) => {
                // S† = S³
                for _ in 0..3 {
                    self.conjugate(CliffordGate::S(a));
                }
            }
            CliffordGate::X(a) => self.sign ^= bit(self.z, a),
            CliffordGate::Z(a) => self.sign ^= bit(self.x, a),
            CliffordGate::Cnot(c, t) => {
                let (xc, zc, xt, zt) = (bit(self.x, c), bit(self.z, c), bit(self.x, t), bit(self.z, t));
                self.sign ^= xc && zt && (xt == zc);
                self.x ^= (xc as u64) << t;
                self.z ^= (zt as u64) << c;
            }
            CliffordGate::Swap(a, b) => {
                for v in [&mut self.x, &mut self.z] {
                    let (ba, bb) = ((*v >> a) & 1, (*v >> b) & 1);
                    *v = (*v & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b);
                }
            }
        }
    }
}

/// Images `U X_j U†` (rows `0..n`) and `U Z_j U†` (rows `n..2n`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tableau {
    n: usize,
    rows: Vec<PauliString>,
}

impl Tableau {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(PauliString::x_on).chain((0..n).map(PauliString::z_on)).collect();
        Self { n, rows }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> PauliString {
        self.rows[q]
    }

    pub fn z_image(&self, q: usize) -> PauliString {
        self.rows[self.n + q]
    }

    pub fn apply(&mut self, gate: CliffordGate) {
        for r in &mut self.rows {
            r.conjugate(gate);
        }
    }

    /// Images commute except for each `(X_j, Z_j)` pair, and stay on `n` qubits.
    pub fn is_symplectic(&self) -> bool {
        let mask = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        if self.rows.iter().any(|r| r.x & !mask != 0 || r.z & !mask != 0 || r.is_identity()) {
            return false;
        }
        (0..2 * self.n).all(|i| {
            (0..2 * self.n).all(|j| {
                let expect = i != j && i % self.n == j % self.n;
                self.rows[i].anticommutes(&self.rows[j]) == expect
            })
        })
    }
}

/// An `n`-qubit Clifford as a gate list, applied first to last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clifford {
    n: usize,
    gates: Vec<CliffordGate>,
    tableau: Tableau,
}

impl Clifford {
    pub fn from_gates(n: usize, gates: Vec<CliffordGate>) -> Result<Self> {
        if n == 0 || n > MAX_CLIFFORD_QUBITS {
            return Err(Error::TooLarge { what: "clifford tableau", qubits: n, cap: MAX_CLIFFORD_QUBITS });
        }
        if let Some(g) = gates.iter().find(|g| g.max_qubit() >= n) {
            return Err(Error::QubitOutOfRange { qubit: g.max_qubit(), n });
        }
        for g in &gates {
            if let CliffordGate::Cnot(a, b) | CliffordGate::Swap(a, b) = *g {
                if a == b {
                    return Err(Error::DuplicateTargets(vec![a, b]));
                }
            }
        }
        let mut tableau = Tableau::identity(n);
        for &g in &gates {
            tableau.apply(g);
        }
        Ok(Self { n, gates, tableau })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_gates(n, Vec::new())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn inverse(&self) -> Self {
        let gates = self.gates.iter().rev().map(|g| g.inverse()).collect();
        Self::from_gates(self.n, gates).expect("inverse of a valid clifford")
    }

    pub fn gate_ops<T: Real>(&self) -> Vec<GateOp<T>> {
        self.gates.iter().map(|g| g.to_gate_op()).collect()
    }

    pub fn apply_to<T: Real>(&self, state: &mut StateVector<T>) -> Result<()> {
        if state.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: state.n_qubits() });
        }
        for g in &self.gates {
            state.apply(&g.to_gate_op())?;
        }
        Ok(())
    }

    /// `U†|x⟩`.
    pub fn inverse_on_basis<T: Real>(&self, x: usize) -> StateVector<T> {
        let mut s = StateVector::basis(self.n, x);
        for g in self.gates.iter().rev() {
            s.apply(&g.inverse().to_gate_op()).expect("gates fit the register");
        }
        s
    }
}

/// Uniformly random `n`-qubit Clifford modulo global phase.
pub fn sample_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Clifford> {
    if n == 0 || n > MAX_CLIFFORD_QUBITS {
        return Err(Error::TooLarge { what: "clifford tableau", qubits: n, cap: MAX_CLIFFORD_QUBITS });
    }
    let mut gates: Vec<CliffordGate> = (0..n)
        .flat_map(|q| {
            let (x, z) = (rng.random::<bool>(), rng.random::<bool>());
            [x.then_some(CliffordGate::X(q)), z.then_some(CliffordGate::Z(q))]
        })
        .flatten()
        .collect();
    let mut stages = Vec::with_capacity(n);
    for i in 0..n {
        let mask = (if n == 64 { u64::MAX } else { (1u64 << n) - 1 }) & !((1u64 << i) - 1);
        let random_pauli = |rng: &mut R| PauliString { x: rng.random::<u64>() & mask, z: rng.random::<u64>() & mask, sign: false };
        let a = loop {
            let p = random_pauli(rng);
            if !p.is_identity() {
                break p;
            }
        };
        let b = loop {
            let p = random_pauli(rng);
            if p.anticommutes(&a) {
                break p;
            }
        };
        stages.push(sweep(i, a, b));
    }
    // C = W_0 W_1 ⋯ W_{n-1} P with W_i the inverse of the i-th sweep
    for v in stages.into_iter().rev() {
        gates.extend(v.into_iter().rev().map(CliffordGate::inverse));
    }
    Clifford::from_gates(n, gates)
}

/// Gates `V` on qubits `≥ i` with `V a V† = ±X_i` and `V b V† = ±Z_i`.
fn sweep(i: usize, mut a: PauliString, mut b: PauliString) -> Vec<CliffordGate> {
    let mut out = Vec::new();
    let mut push = |g: CliffordGate, a: &mut PauliString, b: &mut PauliString| {
        a.conjugate(g);
        b.conjugate(g);
        out.push(g);
    };
    let clear_z = |p: PauliString, push: &mut dyn FnMut(CliffordGate)| {
        for q in bits(p.z) {
            push(if (p.x >> q) & 1 == 1 { CliffordGate::S(q) } else { CliffordGate::H(q) });
        }
    };

    let mut pending = Vec::new();
    clear_z(a, &mut |g| pending.push(g));
    for g in pending.drain(..) {
        push(g, &mut a, &mut b);
    }
    let pivot = a.x.trailing_zeros() as usize;
    for q in bits(a.x).filter(|&q| q != pivot) {
        push(CliffordGate::Cnot(pivot, q), &mut a, &mut b);
    }
    if pivot != i {
        push(CliffordGate::Swap(i, pivot), &mut a, &mut b);
    }
    debug_assert_eq!((a.x, a.z), (1 << i, 0));

    if (b.x, b.z) != (0, 1 << i) {
        push(CliffordGate::H(i), &mut a, &mut b);
        clear_z(b, &mut |g| pending.push(g));
        for g in pending.drain(..) {
            push(g, &mut a, &mut b);
        }
        for q in bits(b.x).filter(|&q| q != i) {
            push(CliffordGate::Cnot(i, q), &mut a, &mut b);
        }
        push(CliffordGate::H(i), &mut a, &mut b);
    }
    debug_assert_eq!((a.x, a.z, b.x, b.z), (1 << i, 0, 0, 1 << i));
    out
}

fn bits(mut v: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (v != 0).then(|| {
            let q = v.trailing_zeros() as usize;
            v &= v - 1;
            q
        })
    })
}

/// The 24 single-qubit Cliffords modulo phase as gate words over `{H, S}`.
pub fn single_qubit_group() -> Vec<Clifford> {
    use crate::statevec::gates::{approx_eq2, canonical_phase2};
    use crate::statevec::kernel::mul2;

    let mut found: Vec<(Vec<CliffordGate>, _)> = vec![(Vec::new(), canonical_phase2(&crate::statevec::gates::identity2()))];
    let mut frontier = 0;
    while frontier < found.len() {
        let (word, mat) = found[frontier].clone();
        frontier += 1;
        for (g, m) in [(CliffordGate::H(0), hadamard::<f64>()), (CliffordGate::S(0), phase_s::<f64>())] {
            let next = canonical_phase2(&mul2(&m, &mat));
            if !found.iter().any(|(_, f)| approx_eq2(f, &next, 1e-9)) {
                let mut w = word.clone();
                w.push(g);
                found.push((w, next));
            }
        }
    }
    found.into_iter().map(|(w, _)| Clifford::from_gates(1, w).expect("one-qubit words")).collect()
}
