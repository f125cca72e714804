//! Dense Hermitian eigensolver.
//!
//! A complex Hermitian `A = X + iY` is diagonalised through its real symmetric
//! embedding `[[X, -Y], [Y, X]]`, whose spectrum is that of `A` with every
//! eigenvalue doubled. Functions of `A` (square roots here) are computed on the
//! embedding and read back from its first block column, which sidesteps any
//! pairing of the degenerate eigenvectors.

use num_complex::Complex;

use crate::scalar::Real;

/// Row-major square matrix of complex entries.
pub type CMatrix<T> = Vec<Complex<T>>;

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi on a real symmetric row-major matrix. Returns eigenvalues and
/// the matrix whose columns are the eigenvectors.
pub fn symmetric_eigen<T: Real>(mut a: Vec<T>, dim: usize) -> (Vec<T>, Vec<T>) {
    assert_eq!(a.len(), dim * dim);
    let mut v = vec![T::zero(); dim * dim];
    for i in 0..dim {
        v[i * dim + i] = T::one();
    }
    let scale = a.iter().fold(T::zero(), |m, x| m.max(x.abs())).max(T::min_positive_value());
    let tiny = scale * T::epsilon();
    let stop = tiny * T::of(dim as f64);
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..dim)
            .flat_map(|p| (p + 1..dim).map(move |q| (p, q)))
            .map(|(p, q)| a[p * dim + q] * a[p * dim + q])
            .sum();
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq.abs() <= tiny * T::of(1e-2) {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (T::of(2.0) * apq);
                let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = c * vkp - s * vkq;
                    v[k * dim + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eig = (0..dim).map(|i| a[i * dim + i]).collect();
    (eig, v)
}

fn embed<T: Real>(m: &[Complex<T>], dim: usize) -> Vec<T> {
    let d2 = 2 * dim;
    let mut r = vec![T::zero(); d2 * d2];
    for i in 0..dim {
        for j in 0..dim {
            // symmetrise against round-off in the input
            let z = (m[i * dim + j] + m[j * dim + i].conj()) * T::of(0.5);
            r[i * d2 + j] = z.re;
            r[(i + dim) * d2 + j + dim] = z.re;
            r[i * d2 + j + dim] = -z.im;
            r[(i + dim) * d2 + j] = z.im;
        }
    }
    r
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &[Complex<T>], dim: usize) -> Vec<T> {
    let (mut eig, _) = symmetric_eigen(embed(m, dim), 2 * dim);
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    // every eigenvalue of the embedding appears twice
    eig.chunks(2).map(|p| (p[0] + p[1]) * T::of(0.5)).collect()
}

/// Principal square root of a positive semidefinite Hermitian matrix. Negative
/// round-off eigenvalues are clamped to zero.
pub fn psd_sqrt<T: Real>(m: &[Complex<T>], dim: usize) -> CMatrix<T> {
    let d2 = 2 * dim;
    let (eig, v) = symmetric_eigen(embed(m, dim), d2);
    let roots: Vec<T> = eig.iter().map(|&l| l.max(T::zero()).sqrt()).collect();
    let mut out = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            // (Q diag Qᵀ) restricted to the first block column: top-left gives
            // the real part, bottom-left the imaginary part.
            let mut re = T::zero();
            let mut im = T::zero();
            for k in 0..d2 {
                let w = roots[k] * v[j * d2 + k];
                re = re + v[i * d2 + k] * w;
                im = im + v[(i + dim) * d2 + k] * w;
            }
            out[i * dim + j] = Complex::new(re, im);
        }
    }
    out
}

pub fn matmul<T: Real>(a: &[Complex<T>], b: &[Complex<T>], dim: usize) -> CMatrix<T> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik.re == T::zero() && aik.im == T::zero() {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] = out[i * dim + j] + aik * b[k * dim + j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn real_symmetric_spectrum() {
        let a: Vec<f64> = vec![2.0, 1.0, 1.0, 2.0];
        let (mut e, _) = symmetric_eigen(a, 2);
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_pauli_y_spectrum() {
        let y = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ];
        let e = hermitian_eigenvalues(&y, 2);
        assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        // |+i><+i| mixed with identity
        let m = vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -0.3),
            Complex64::new(0.0, 0.3),
            Complex64::new(0.5, 0.0),
        ];
        let r = psd_sqrt(&m, 2);
        let back = matmul(&r, &r, 2);
        for (x, y) in back.iter().zip(&m) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
