//! Standard gate matrices and the single-qubit Clifford group.

use num_complex::Complex;

use super::kernel::{kron, mul2, mul4, Mat2, Mat4};
use crate::scalar::{cplx, Real};

fn m2<T: Real>(e: [[(f64, f64); 2]; 2]) -> Mat2<T> {
    e.map(|row| row.map(|(re, im)| cplx(re, im)))
}

pub fn identity2<T: Real>() -> Mat2<T> {
    m2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (1.0, 0.0)]])
}

pub fn pauli_x<T: Real>() -> Mat2<T> {
    m2([[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]])
}

pub fn pauli_y<T: Real>() -> Mat2<T> {
    m2([[(0.0, 0.0), (0.0, -1.0)], [(0.0, 1.0), (0.0, 0.0)]])
}

pub fn pauli_z<T: Real>() -> Mat2<T> {
    m2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]])
}

pub fn hadamard<T: Real>() -> Mat2<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    m2([[(h, 0.0), (h, 0.0)], [(h, 0.0), (-h, 0.0)]])
}

pub fn phase_s<T: Real>() -> Mat2<T> {
    m2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (0.0, 1.0)]])
}

pub fn adjoint_s<T: Real>() -> Mat2<T> {
    m2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (0.0, -1.0)]])
}

pub fn phase_t<T: Real>() -> Mat2<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    m2([[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (h, h)]])
}

/// Pauli by index: 0 = I, 1 = X, 2 = Y, 3 = Z.
pub fn pauli<T: Real>(idx: usize) -> Mat2<T> {
    match idx {
        0 => identity2(),
        1 => pauli_x(),
        2 => pauli_y(),
        3 => pauli_z(),
        _ => panic!("pauli index {idx} out of range"),
    }
}

pub fn identity4<T: Real>() -> Mat4<T> {
    kron(&identity2(), &identity2())
}

pub fn cz<T: Real>() -> Mat4<T> {
    let mut m = identity4::<T>();
    m[3][3] = cplx(-1.0, 0.0);
    m
}

/// Controlled-X with the control on the first target.
pub fn cnot<T: Real>() -> Mat4<T> {
    let z = Complex::new(T::zero(), T::zero());
    let o = Complex::new(T::one(), T::zero());
    [[o, z, z, z], [z, o, z, z], [z, z, z, o], [z, z, o, z]]
}

pub fn swap<T: Real>() -> Mat4<T> {
    let z = Complex::new(T::zero(), T::zero());
    let o = Complex::new(T::one(), T::zero());
    [[o, z, z, z], [z, z, o, z], [z, o, z, z], [z, z, z, o]]
}

/// Fixes the global phase so the first nonzero entry is real and
/// positive; two matrices equal up to phase canonicalise identically.
pub fn canonical_phase2(m: &Mat2<f64>) -> Mat2<f64> {
    let flat = [m[0][0], m[0][1], m[1][0], m[1][1]];
    let pivot = flat
        .iter()
        .copied()
        .find(|z| z.norm() > 1e-9)
        .expect("nonzero matrix");
    let phase = pivot.conj() / pivot.norm();
    m.map(|row| row.map(|x| x * phase))
}

pub fn approx_eq2(a: &Mat2<f64>, b: &Mat2<f64>, tol: f64) -> bool {
    (0..2).all(|r| (0..2).all(|c| (a[r][c] - b[r][c]).norm() < tol))
}

/// The 24 single-qubit Cliffords modulo global phase, in a fixed order
/// generated breadth-first from `{H, S}` starting at the identity.
pub fn single_qubit_cliffords() -> Vec<Mat2<f64>> {
    let gens = [hadamard::<f64>(), phase_s::<f64>()];
    let mut found: Vec<Mat2<f64>> = vec![identity2()];
    let mut frontier = 0;
    while frontier < found.len() {
        let cur = found[frontier];
        frontier += 1;
        for g in &gens {
            let next = canonical_phase2(&mul2(g, &cur));
            if !found.iter().any(|m| approx_eq2(m, &next, 1e-9)) {
                found.push(next);
            }
        }
    }
    debug_assert_eq!(found.len(), 24);
    found
}

pub fn cast2<T: Real>(m: &Mat2<f64>) -> Mat2<T> {
    m.map(|row| row.map(|z| cplx(z.re, z.im)))
}

pub fn cast4<T: Real>(m: &Mat4<f64>) -> Mat4<T> {
    m.map(|row| row.map(|z| cplx(z.re, z.im)))
}

/// `(a ⊗ b) · CZ · (c ⊗ d)`.
pub fn cz_brick(a: &Mat2<f64>, b: &Mat2<f64>, c: &Mat2<f64>, d: &Mat2<f64>) -> Mat4<f64> {
    mul4(&mul4(&kron(a, b), &cz()), &kron(c, d))
}
