//! Symmetric-subspace cloning and Haar sampling.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::density::MAX_DENSITY_QUBITS;
use crate::error::{Error, Result};
use crate::{Density, State};

/// Haar-random pure state from a normalised complex Gaussian vector.
pub fn haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> State {
    loop {
        let amps: Vec<Complex64> =
            (0..1usize << n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        if let Ok(s) = State::normalized(amps) {
            return s;
        }
    }
}

/// Optimal fidelity of `k → k+1` cloning in dimension `2ⁿ`: `(k+1)/(2ⁿ+k)`.
pub fn werner_fidelity(n: usize, k: usize) -> f64 {
    (k + 1) as f64 / ((n as f64).exp2() + k as f64)
}

/// Moves `n`-qubit block `from` of a `copies`-block index to position `to`,
/// shifting the blocks in between.
fn move_block(index: usize, n: usize, copies: usize, from: usize, to: usize) -> usize {
    let mask = (1usize << n) - 1;
    let mut blocks: Vec<usize> = (0..copies).map(|b| (index >> (b * n)) & mask).collect();
    let v = blocks.remove(from);
    blocks.insert(to, v);
    blocks.iter().enumerate().fold(0, |acc, (b, &v)| acc | (v << (b * n)))
}

/// `P_sym |v⟩` for a `copies`-fold register of `n`-qubit blocks, by
/// averaging over every permutation of the blocks.
pub fn project_symmetric(v: &State, n: usize, copies: usize) -> Result<Vec<Complex64>> {
    if v.n_qubits() != n * copies {
        return Err(Error::DimensionMismatch { left: n * copies, right: v.n_qubits() });
    }
    let perms = permutations(copies);
    let mask = (1usize << n) - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); v.dim()];
    for (idx, &a) in v.amplitudes().iter().enumerate() {
        for p in &perms {
            let target = p.iter().enumerate().fold(0, |acc, (b, &src)| acc | (((idx >> (src * n)) & mask) << (b * n)));
            out[target] += a;
        }
    }
    let scale = 1.0 / perms.len() as f64;
    out.iter_mut().for_each(|z| *z *= scale);
    Ok(out)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Output of the cloner as the branches `P_sym |ψ^{⊗k} x⟩` over basis
/// states `x` of the blank block, summed incoherently.
#[derive(Debug, Clone)]
pub struct WernerClone {
    n: usize,
    copies: usize,
    branches: Vec<Vec<Complex64>>,
    norm: f64,
    fidelity: f64,
}

impl WernerClone {
    pub fn copies(&self) -> usize {
        self.copies
    }

    /// `F(ρ_out, |ψ⟩⟨ψ|^{⊗k+1})`.
    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }

    pub fn density(&self) -> Result<Density> {
        let q = self.n * self.copies;
        if q > MAX_DENSITY_QUBITS {
            return Err(Error::TooLarge { what: "werner clone density", qubits: q, cap: MAX_DENSITY_QUBITS });
        }
        let dim = 1usize << q;
        let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
        for b in &self.branches {
            for r in 0..dim {
                if b[r].norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    mat[r * dim + c] += b[r] * b[c].conj() / self.norm;
                }
            }
        }
        Density::from_matrix(q, mat)
    }
}

/// Projects `|ψ⟩^{⊗k} ⊗ I/2ⁿ` onto the `(k+1)`-fold symmetric subspace.
pub fn werner_clone(psi: &State, k: usize) -> Result<WernerClone> {
    let n = psi.n_qubits();
    let copies = k + 1;
    if n * copies > MAX_DENSITY_QUBITS {
        return Err(Error::TooLarge { what: "werner cloner", qubits: n * copies, cap: MAX_DENSITY_QUBITS });
    }
    let input = psi.tensor_power(k);
    let target = psi.tensor_power(copies);
    let mut branches = Vec::with_capacity(1 << n);
    let (mut norm, mut overlap) = (0.0, 0.0);
    for x in 0..1usize << n {
        // symmetrise ψ^{⊗k}⊗x by placing x at each of the k+1 positions
        let blank = input.tensor(&State::basis(n, x));
        let mut b = vec![Complex64::new(0.0, 0.0); blank.dim()];
        for (idx, &a) in blank.amplitudes().iter().enumerate() {
            for pos in 0..copies {
                b[move_block(idx, n, copies, k, pos)] += a / copies as f64;
            }
        }
        norm += b.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let ip: Complex64 = target.amplitudes().iter().zip(&b).map(|(t, v)| t.conj() * v).sum();
        overlap += ip.norm_sqr();
        branches.push(b);
    }
    Ok(WernerClone { n, copies, branches, norm, fidelity: overlap / norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn projector_is_idempotent() {
        // columns P|j⟩ for one-qubit blocks, three copies
        let (n, copies) = (1, 3);
        let dim = 1 << (n * copies);
        let cols: Vec<Vec<Complex64>> =
            (0..dim).map(|j| project_symmetric(&State::basis(n * copies, j), n, copies).unwrap()).collect();
        for r in 0..dim {
            for c in 0..dim {
                let sq: Complex64 = (0..dim).map(|m| cols[m][r] * cols[c][m]).sum();
                assert!((sq - cols[c][r]).norm() < 1e-9);
                assert!((cols[c][r] - cols[r][c].conj()).norm() < 1e-12);
            }
        }
        let rank: f64 = (0..dim).map(|j| cols[j][j].re).sum();
        // dim Sym³(C²) = 4
        assert!((rank - 4.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_input_is_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = haar_state(2, &mut rng);
        let v = psi.tensor_power(3);
        let p = project_symmetric(&v, 2, 3).unwrap();
        for (a, b) in v.amplitudes().iter().zip(&p) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fidelity_matches_formula_for_every_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, k) in [(1, 1), (1, 2), (2, 1), (1, 4), (2, 2)] {
            let psi = haar_state(n, &mut rng);
            let clone = werner_clone(&psi, k).unwrap();
            assert!((clone.fidelity() - werner_fidelity(n, k)).abs() < 1e-9, "n={n} k={k}");
        }
    }

    #[test]
    fn density_route_agrees_and_is_symmetric() {
        let psi = State::normalized(vec![cplx(0.3, 0.2), cplx(0.1, -0.9)]).unwrap();
        let clone = werner_clone(&psi, 2).unwrap();
        let rho = clone.density().unwrap();
        assert!((rho.expectation(&psi.tensor_power(3)).unwrap() - clone.fidelity()).abs() < 1e-9);
        // columns of ρ lie in the symmetric subspace
        for c in 0..rho.dim() {
            let col: Vec<Complex64> = (0..rho.dim()).map(|r| rho.entry(r, c)).collect();
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-12 {
                continue;
            }
            let s = State::normalized(col.clone()).unwrap();
            let p = project_symmetric(&s, 1, 3).unwrap();
            for (a, b) in s.amplitudes().iter().zip(&p) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn size_cap() {
        let psi = State::zero(4);
        assert!(matches!(werner_clone(&psi, 3), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn haar_states_are_normalised() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            assert!((haar_state(3, &mut rng).norm() - 1.0).abs() < 1e-12);
        }
    }
}
