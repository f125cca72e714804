//! Mixed-state simulation on dense `2ⁿ × 2ⁿ` matrices.
//!
//! Storage is row-major, and viewed as a `2n`-qubit vector whose low `n` bits
//! index the column and high `n` bits the row. Conjugating by a gate `U` is
//! then `U` on the row qubits and `conj(U)` on the column qubits, which reuses
//! the pure-state kernels unchanged.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;
use crate::statevec::{GateOp, StateVector};

/// Largest register a density operator may hold (`4ⁿ` entries).
pub const MAX_DENSITY_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T> {
    n: usize,
    mat: Vec<Complex<T>>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::TooLarge { what: "density operator", qubits: n, cap: MAX_DENSITY_QUBITS });
    }
    Ok(())
}

impl<T: Real> DensityOperator<T> {
    pub fn from_pure(psi: &StateVector<T>) -> Result<Self> {
        check_size(psi.n_qubits())?;
        let a = psi.amplitudes();
        let dim = a.len();
        let mut mat = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                mat.push(a[r] * a[c].conj());
            }
        }
        Ok(Self { n: psi.n_qubits(), mat })
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        let mut mat = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        let w = T::one() / T::of(dim as f64);
        for i in 0..dim {
            mat[i * dim + i] = Complex::new(w, T::zero());
        }
        Ok(Self { n, mat })
    }

    /// Validates Hermiticity, unit trace and positivity within tolerance.
    pub fn from_matrix(n: usize, mat: Vec<Complex<T>>) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        if mat.len() != dim * dim {
            return Err(Error::InvalidDensity(format!("expected {} entries, got {}", dim * dim, mat.len())));
        }
        let rho = Self { n, mat };
        rho.validate()?;
        Ok(rho)
    }

    /// Skips validation; used for intermediate sums that are valid by
    /// construction.
    pub(crate) fn from_raw(n: usize, mat: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(mat.len(), 1 << (2 * n));
        Self { n, mat }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.mat[row * self.dim() + col]
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.mat
    }

    pub fn trace(&self) -> Complex<T> {
        let dim = self.dim();
        (0..dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.mat[i * dim + i])
    }

    pub fn hermiticity_defect(&self) -> T {
        let dim = self.dim();
        let mut worst = T::zero();
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.mat[r * dim + c] - self.mat[c * dim + r].conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::hermitian_eigenvalues(&self.mat, self.dim())
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::tolerance();
        let herm = self.hermiticity_defect();
        if herm > tol {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {herm})")));
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = self.eigenvalues().first().copied().unwrap_or(T::zero());
        if min < -T::of(1e-9).max(tol) {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }

    /// `ρ ↦ U ρ U†`.
    pub fn apply(&mut self, gate: &GateOp<T>) -> Result<()> {
        gate.check_targets(self.n)?;
        let n = self.n;
        let row_targets: Vec<usize> = gate.targets().iter().map(|q| q + n).collect();
        let row_gate = gate.retarget(&row_targets)?;
        row_gate.apply_raw(&mut self.mat);
        let col_gate = GateOp::new(gate.label(), gate.targets(), gate.matrix().conj())?;
        col_gate.apply_raw(&mut self.mat);
        Ok(())
    }

    pub fn applied(mut self, gate: &GateOp<T>) -> Result<Self> {
        self.apply(gate)?;
        Ok(self)
    }

    /// `ρ ↦ (1-p) ρ + (p/3)(XρX + YρY + ZρZ)` on qubit `q`.
    ///
    /// Uses `Σ_P PρP = 2 Tr_q(ρ) ⊗ I − ρ`: diagonal blocks in qubit `q` mix
    /// with weight `2p/3`, off-diagonal blocks shrink by `1 − 4p/3`.
    pub fn depolarize(&mut self, q: usize, p: T) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
        }
        if !(T::zero()..=T::one()).contains(&p) {
            return Err(Error::InvalidNoise(format!("depolarizing probability {p} outside [0, 1]")));
        }
        let dim = self.dim();
        let bit = 1usize << q;
        let mix = T::of(2.0) * p / T::of(3.0);
        let keep = T::one() - mix;
        let shrink = T::one() - T::of(4.0) * p / T::of(3.0);
        for r in (0..dim).filter(|r| r & bit == 0) {
            for c in (0..dim).filter(|c| c & bit == 0) {
                let i00 = r * dim + c;
                let i11 = (r | bit) * dim + (c | bit);
                let i01 = r * dim + (c | bit);
                let i10 = (r | bit) * dim + c;
                let (a, b) = (self.mat[i00], self.mat[i11]);
                self.mat[i00] = a * keep + b * mix;
                self.mat[i11] = b * keep + a * mix;
                self.mat[i01] = self.mat[i01] * shrink;
                self.mat[i10] = self.mat[i10] * shrink;
            }
        }
        Ok(())
    }

    /// `ρ ↦ F ρ + (1-F) I/2ⁿ`.
    pub fn mix_with_identity(&self, fidelity: T) -> Self {
        let dim = self.dim();
        let w = (T::one() - fidelity) / T::of(dim as f64);
        let mut mat: Vec<Complex<T>> = self.mat.iter().map(|x| *x * fidelity).collect();
        for i in 0..dim {
            mat[i * dim + i] = mat[i * dim + i] + Complex::new(w, T::zero());
        }
        Self { n: self.n, mat }
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector<T>) -> Result<T> {
        if psi.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: psi.n_qubits() });
        }
        let a = psi.amplitudes();
        let dim = self.dim();
        let mut acc = Complex::new(T::zero(), T::zero());
        for r in 0..dim {
            let mut row = Complex::new(T::zero(), T::zero());
            for c in 0..dim {
                row = row + self.mat[r * dim + c] * a[c];
            }
            acc = acc + a[r].conj() * row;
        }
        Ok(acc.re)
    }

    /// Probability of the computational-basis outcome `x`.
    pub fn probability(&self, x: usize) -> T {
        self.mat[x * self.dim() + x].re
    }

    /// Traces out every qubit not in `keep`. Kept qubits are renumbered in
    /// ascending order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let keep = normalize_keep(keep, self.n)?;
        let m = keep.len();
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let dk = 1usize << m;
        let dt = 1usize << traced.len();
        let dim = self.dim();
        let mut out = vec![Complex::new(T::zero(), T::zero()); dk * dk];
        for r in 0..dk {
            let rb = scatter(r, &keep);
            for c in 0..dk {
                let cb = scatter(c, &keep);
                let mut acc = Complex::new(T::zero(), T::zero());
                for e in 0..dt {
                    let eb = scatter(e, &traced);
                    acc = acc + self.mat[(rb | eb) * dim + (cb | eb)];
                }
                out[r * dk + c] = acc;
            }
        }
        Ok(Self { n: m, mat: out })
    }

    /// `F(ρ, σ) = (Tr √(√ρ σ √ρ))²`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let dim = self.dim();
        let root = linalg::psd_sqrt(&self.mat, dim);
        let inner = linalg::matmul(&linalg::matmul(&root, &other.mat, dim), &root, dim);
        let eig = linalg::hermitian_eigenvalues(&inner, dim);
        let top = eig.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        // eigenvalues at round-off level would otherwise contribute ~sqrt(eps)
        let cutoff = T::epsilon() * T::of(64.0) * top.max(T::one());
        let tr: T = eig.into_iter().filter(|&l| l > cutoff).map(|l| l.sqrt()).sum();
        Ok((tr * tr).min(T::one()))
    }

    /// `‖ρ - σ‖_max`, for tests and two-route checks.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.mat.iter().zip(&other.mat).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }
}

/// Sorted, deduplicated keep set validated against `n`.
fn normalize_keep(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut k = keep.to_vec();
    k.sort_unstable();
    k.dedup();
    if let Some(&q) = k.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { qubit: q, n });
    }
    Ok(k)
}

/// Spreads the bits of `x` onto the qubit positions in `qubits`.
fn scatter(x: usize, qubits: &[usize]) -> usize {
    qubits.iter().enumerate().fold(0, |acc, (i, &q)| acc | (((x >> i) & 1) << q))
}

pub(crate) fn reduce_pure<T: Real>(psi: &StateVector<T>, keep: &[usize]) -> Result<DensityOperator<T>> {
    let n = psi.n_qubits();
    let keep = normalize_keep(keep, n)?;
    check_size(keep.len())?;
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1usize << keep.len();
    let dt = 1usize << traced.len();
    let a = psi.amplitudes();
    let kept_offsets: Vec<usize> = (0..dk).map(|r| scatter(r, &keep)).collect();
    let mut out = vec![Complex::new(T::zero(), T::zero()); dk * dk];
    for e in 0..dt {
        let eb = scatter(e, &traced);
        for r in 0..dk {
            let ar = a[kept_offsets[r] | eb];
            if ar.re == T::zero() && ar.im == T::zero() {
                continue;
            }
            for c in 0..dk {
                out[r * dk + c] = out[r * dk + c] + ar * a[kept_offsets[c] | eb].conj();
            }
        }
    }
    Ok(DensityOperator::from_raw(keep.len(), out))
}
