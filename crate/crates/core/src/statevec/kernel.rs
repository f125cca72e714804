//! In-place gate kernels over raw amplitude buffers.
//!
//! Qubit `q` is bit `q` of the amplitude index. For two-qubit matrices on
//! targets `(t0, t1)` the local basis index is `2·bit(t0) + bit(t1)`, so
//! `kron(a, b)` acts with `a` on `t0` and `b` on `t1`.

use num_complex::Complex;

use crate::scalar::Real;

pub type Mat2<T> = [[Complex<T>; 2]; 2];
pub type Mat4<T> = [[Complex<T>; 4]; 4];

pub fn apply_1q<T: Real>(amps: &mut [Complex<T>], m: &Mat2<T>, q: usize) {
    let stride = 1usize << q;
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            let j = i + stride;
            let a0 = amps[i];
            let a1 = amps[j];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
        base += 2 * stride;
    }
}

pub fn apply_2q<T: Real>(amps: &mut [Complex<T>], m: &Mat4<T>, t0: usize, t1: usize) {
    debug_assert_ne!(t0, t1);
    let b0 = 1usize << t0;
    let b1 = 1usize << t1;
    let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
    let quarter = amps.len() >> 2;
    for r in 0..quarter {
        // insert zero bits at positions lo and hi
        let low = r & ((1 << lo) - 1);
        let rest = r >> lo;
        let mid = rest & ((1 << (hi - lo - 1)) - 1);
        let top = rest >> (hi - lo - 1);
        let i = low | (mid << (lo + 1)) | (top << (hi + 1));
        let idx = [i, i | b1, i | b0, i | b0 | b1];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (row, &target) in idx.iter().enumerate() {
            amps[target] = m[row][0] * v[0] + m[row][1] * v[1] + m[row][2] * v[2] + m[row][3] * v[3];
        }
    }
}

pub fn adjoint2<T: Real>(m: &Mat2<T>) -> Mat2<T> {
    let mut out = *m;
    for (r, row) in out.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = m[c][r].conj();
        }
    }
    out
}

pub fn adjoint4<T: Real>(m: &Mat4<T>) -> Mat4<T> {
    let mut out = *m;
    for (r, row) in out.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = m[c][r].conj();
        }
    }
    out
}

pub fn conj2<T: Real>(m: &Mat2<T>) -> Mat2<T> {
    m.map(|row| row.map(|x| x.conj()))
}

pub fn conj4<T: Real>(m: &Mat4<T>) -> Mat4<T> {
    m.map(|row| row.map(|x| x.conj()))
}

pub fn kron<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat4<T> {
    let z = Complex::new(T::zero(), T::zero());
    let mut out = [[z; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = a[r >> 1][c >> 1] * b[r & 1][c & 1];
        }
    }
    out
}

pub fn mul4<T: Real>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let z = Complex::new(T::zero(), T::zero());
    let mut out = [[z; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).fold(z, |acc, k| acc + a[r][k] * b[k][c]);
        }
    }
    out
}

pub fn mul2<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let z = Complex::new(T::zero(), T::zero());
    let mut out = [[z; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Largest entrywise deviation of `m† m` from the identity.
pub fn unitarity_defect<T: Real, const D: usize>(m: &[[Complex<T>; D]; D]) -> T {
    let mut worst = T::zero();
    for r in 0..D {
        for c in 0..D {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..D {
                acc = acc + m[k][r].conj() * m[k][c];
            }
            let target = if r == c { T::one() } else { T::zero() };
            worst = worst.max((acc - Complex::new(target, T::zero())).norm());
        }
    }
    worst
}
