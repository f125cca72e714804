//! Scalar abstraction for the simulation kernel.
//!
//! Everything below the protocol layer (state vectors, density operators, gate
//! matrices, circuit preparation) is written against [`Real`] so the kernel
//! runs in either `f32` or `f64`. The protocol modules fix `f64` through the
//! aliases at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point type usable as the component type of amplitudes.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for unitarity, normalization and Hermiticity checks.
    fn tolerance() -> Self;

    /// Lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite float converts to f64")
    }
}

impl Real for f64 {
    fn tolerance() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

/// Lifts an `f64` complex number into `Complex<T>`.
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}

pub fn cast_complex<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::of(z.re), T::of(z.im))
}
