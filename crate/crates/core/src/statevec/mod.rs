//! Exact pure-state simulation.
//!
//! [`StateVector`] stores all `2ⁿ` amplitudes with qubit 0 as the
//! least-significant index bit. Gates are [`GateOp`] values carrying their own
//! matrix, validated for unitarity at construction.

pub mod gates;
pub mod kernel;

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;
use kernel::{Mat2, Mat4};

/// Unitary acting on one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix<T> {
    One(Mat2<T>),
    Two(Mat4<T>),
}

impl<T: Real> GateMatrix<T> {
    pub fn arity(&self) -> usize {
        match self {
            GateMatrix::One(_) => 1,
            GateMatrix::Two(_) => 2,
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            GateMatrix::One(m) => GateMatrix::One(kernel::adjoint2(m)),
            GateMatrix::Two(m) => GateMatrix::Two(kernel::adjoint4(m)),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            GateMatrix::One(m) => GateMatrix::One(kernel::conj2(m)),
            GateMatrix::Two(m) => GateMatrix::Two(kernel::conj4(m)),
        }
    }

    fn unitarity_defect(&self) -> T {
        match self {
            GateMatrix::One(m) => kernel::unitarity_defect(m),
            GateMatrix::Two(m) => kernel::unitarity_defect(m),
        }
    }
}

/// A one- or two-qubit gate bound to concrete target qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp<T> {
    label: String,
    targets: Vec<usize>,
    matrix: GateMatrix<T>,
}

impl<T: Real> GateOp<T> {
    pub fn new(label: impl Into<String>, targets: &[usize], matrix: GateMatrix<T>) -> Result<Self> {
        let label = label.into();
        if targets.len() != matrix.arity() {
            return Err(Error::InvalidParams(format!(
                "gate `{label}` has arity {} but {} targets",
                matrix.arity(),
                targets.len()
            )));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateTargets(targets.to_vec()));
        }
        let defect = matrix.unitarity_defect();
        if defect > T::tolerance() {
            return Err(Error::NonUnitary { label, deviation: defect.as_f64() });
        }
        Ok(Self { label, targets: targets.to_vec(), matrix })
    }

    pub fn single(label: impl Into<String>, q: usize, m: Mat2<T>) -> Result<Self> {
        Self::new(label, &[q], GateMatrix::One(m))
    }

    pub fn pair(label: impl Into<String>, q0: usize, q1: usize, m: Mat4<T>) -> Result<Self> {
        Self::new(label, &[q0, q1], GateMatrix::Two(m))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &GateMatrix<T> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        let label = match self.label.strip_suffix('†') {
            Some(base) => base.to_string(),
            None => format!("{}†", self.label),
        };
        Self { label, targets: self.targets.clone(), matrix: self.matrix.adjoint() }
    }

    /// Same gate moved to other qubits.
    pub fn retarget(&self, targets: &[usize]) -> Result<Self> {
        Self::new(self.label.clone(), targets, self.matrix.clone())
    }

    pub(crate) fn check_targets(&self, n: usize) -> Result<()> {
        for &q in &self.targets {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
        }
        Ok(())
    }

    /// Applies to a raw buffer of `n` qubits; targets must be valid.
    pub(crate) fn apply_raw(&self, amps: &mut [Complex<T>]) {
        match &self.matrix {
            GateMatrix::One(m) => kernel::apply_1q(amps, m, self.targets[0]),
            GateMatrix::Two(m) => kernel::apply_2q(amps, m, self.targets[0], self.targets[1]),
        }
    }
}

/// Pure state of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0ⁿ⟩`.
    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Self {
        assert!(n < usize::BITS as usize, "register too large");
        let dim = 1usize << n;
        assert!(index < dim, "basis index {index} out of range for {n} qubits");
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Self { n, amps }
    }

    /// Wraps an amplitude vector; the length must be a power of two and the
    /// norm must be 1 within tolerance.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let s = Self { n: dim.trailing_zeros() as usize, amps };
        let norm = s.norm();
        if (norm - T::one()).abs() > T::tolerance() * T::of(10.0) {
            return Err(Error::NotNormalized(norm.as_f64()));
        }
        Ok(s)
    }

    /// Like [`from_amplitudes`](Self::from_amplitudes) but rescales to unit norm.
    pub fn normalized(amps: Vec<Complex<T>>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::zero() {
            return Err(Error::NotNormalized(0.0));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n: dim.trailing_zeros() as usize, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn apply(&mut self, gate: &GateOp<T>) -> Result<()> {
        gate.check_targets(self.n)?;
        gate.apply_raw(&mut self.amps);
        Ok(())
    }

    /// Consuming form of [`apply`](Self::apply).
    pub fn applied(mut self, gate: &GateOp<T>) -> Result<Self> {
        self.apply(gate)?;
        Ok(self)
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateOp<T>>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn probability(&self, outcome: usize) -> T {
        self.amps[outcome].norm_sqr()
    }

    /// Exact outcome distribution of a computational-basis measurement.
    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Samples a computational-basis outcome; bit `q` of the result is qubit `q`.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr().as_f64();
            if u < acc {
                return i;
            }
        }
        // round-off left u above the accumulated mass; take the last outcome
        // with support
        self.amps.iter().rposition(|a| a.norm_sqr() > T::zero()).unwrap_or(0)
    }

    /// `self ⊗ other` with `self` on the low qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(*a * *b);
            }
        }
        Self { n: self.n + other.n, amps }
    }

    /// `|ψ⟩^{⊗k}`; `k = 0` gives the zero-qubit scalar state.
    pub fn tensor_power(&self, k: usize) -> Self {
        let mut out = Self { n: 0, amps: vec![Complex::new(T::one(), T::zero())] };
        for _ in 0..k {
            out = out.tensor(self);
        }
        out
    }

    /// Reduced density matrix on `keep` (ascending qubit order becomes the
    /// new qubit order) computed straight from the amplitudes.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<crate::density::DensityOperator<T>> {
        crate::density::reduce_pure(self, keep)
    }

    pub fn cast<U: Real>(&self) -> StateVector<U> {
        StateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| Complex::new(U::of(a.re.as_f64()), U::of(a.im.as_f64()))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::gates::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h(q: usize) -> GateOp<f64> {
        GateOp::single("H", q, hadamard()).unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let s = StateVector::<f64>::zero(1).applied(&h(0)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - r).abs() < 1e-15);
    }

    #[test]
    fn identity_gate_leaves_state() {
        let mut s = StateVector::<f64>::zero(3);
        s.apply(&h(1)).unwrap();
        let before = s.clone();
        s.apply(&GateOp::single("I", 2, identity2()).unwrap()).unwrap();
        s.apply(&GateOp::pair("II", 0, 2, identity4()).unwrap()).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        // |10⟩ with qubit 1 = 1, qubit 0 = 0 is index 2
        let s = StateVector::<f64>::basis(2, 0b10);
        let out = s.applied(&GateOp::pair("CX", 1, 0, cnot()).unwrap()).unwrap();
        assert!((out.probability(0b11) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_qubit_gate_respects_target_order() {
        // kron(X, I) on targets (2, 0) flips qubit 2 only
        let g = GateOp::pair("XI", 2, 0, kernel::kron(&pauli_x(), &identity2())).unwrap();
        let out = StateVector::<f64>::zero(3).applied(&g).unwrap();
        assert!((out.probability(0b100) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_gates() {
        let mut bad = identity2::<f64>();
        bad[0][0] = Complex::new(2.0, 0.0);
        assert!(matches!(GateOp::single("bad", 0, bad), Err(Error::NonUnitary { .. })));
        assert!(matches!(GateOp::pair("cz", 1, 1, cz::<f64>()), Err(Error::DuplicateTargets(_))));
        let mut s = StateVector::<f64>::zero(2);
        assert!(matches!(s.apply(&h(2)), Err(Error::QubitOutOfRange { qubit: 2, n: 2 })));
    }

    #[test]
    fn inner_products() {
        let zero = StateVector::<f64>::zero(1);
        let one = StateVector::<f64>::basis(1, 1);
        let plus = zero.clone().applied(&h(0)).unwrap();
        assert!((zero.inner(&zero).unwrap().re - 1.0).abs() < 1e-15);
        assert!(zero.inner(&one).unwrap().norm() < 1e-15);
        assert!((zero.overlap(&plus).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(zero.inner(&StateVector::zero(2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn measuring_basis_state_is_deterministic() {
        let s = StateVector::<f64>::basis(4, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(s.measure_all(&mut rng), 0);
        }
    }

    #[test]
    fn plus_state_measurement_is_balanced() {
        let plus = StateVector::<f64>::zero(1).applied(&h(0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shots = 10_000;
        let ones = (0..shots).filter(|_| plus.measure_all(&mut rng) == 1).count() as f64;
        let sigma = (shots as f64 * 0.25).sqrt();
        assert!((ones - shots as f64 / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn tensor_places_left_factor_low() {
        let a = StateVector::<f64>::basis(1, 1);
        let b = StateVector::<f64>::basis(2, 0);
        assert!((a.tensor(&b).probability(0b001) - 1.0).abs() < 1e-15);
        assert!((b.tensor(&a).probability(0b100) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn f32_kernel_matches_f64() {
        let mut a = StateVector::<f32>::zero(3);
        let mut b = StateVector::<f64>::zero(3);
        for q in 0..3 {
            a.apply(&GateOp::single("H", q, hadamard()).unwrap()).unwrap();
            b.apply(&h(q)).unwrap();
        }
        a.apply(&GateOp::pair("CZ", 0, 2, cz()).unwrap()).unwrap();
        b.apply(&GateOp::pair("CZ", 0, 2, cz()).unwrap()).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x.re as f64 - y.re).abs() < 1e-6);
        }
    }
}
