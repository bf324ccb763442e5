//! Numerical laboratory for quantum Zeno products of channels and GKLS semigroups.

pub mod error;
pub mod harness;
pub mod channels;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod semigroup;
pub mod spectral;
pub mod zeno;

pub use error::{Result, ZenoError};
pub use scalar::{Complex, Real};

pub type C64 = Complex<f64>;
pub type CMatrix = linalg::CMat<f64>;
pub type CMatrix32 = linalg::CMat<f32>;
