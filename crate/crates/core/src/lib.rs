//! Random-circuit one-way state generators on an exact simulator.
//!
//! The simulator kernels in [`statevec`] and [`density`] are generic over
//! [`scalar::Real`]; the aliases below fix the precision. Everything above
//! the kernels works in `f64`.

pub mod attacks;
pub mod analysis;
pub mod circuits;
pub mod commitments;
pub mod density;
pub mod error;
pub mod linalg;
pub mod noise;
pub mod owsg;
pub mod scalar;
pub mod signatures;
pub mod statevec;
pub mod stats;

pub type State = statevec::StateVector<f64>;
pub type Density = density::DensityOperator<f64>;
pub type State32 = statevec::StateVector<f32>;
pub type Density32 = density::DensityOperator<f32>;
