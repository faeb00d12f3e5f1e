//! Exact and numerical machinery for the classical-quantum correspondence on
//! real hyperbolic space `H^{n+1}`.
//!
//! The exact side (polynomial algebra, symmetric tensors, the Lorentz Lie
//! algebra, the horosphere operators and the band polynomials) works over
//! `BigRational`.  The numerical side (hyperboloid geometry, Poisson
//! transforms, finite-difference residuals) works in `f64`.

pub mod algebra;
pub mod bands;
pub mod error;
pub mod horosphere;
pub mod hypgeo;
pub mod liealg;
pub mod poisson;
pub mod quantum;
pub mod symtensor;

pub use error::{Error, Result};
