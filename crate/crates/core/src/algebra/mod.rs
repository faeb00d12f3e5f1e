//! Exact algebra: rationals, sparse multivariate polynomials, rational
//! functions and derivations.

pub mod derivation;
mod gcd;
pub mod linsolve;
pub mod poly;
pub mod ratfn;
pub mod rational;

pub use derivation::Derivation;
pub use gcd::gcd;
pub use poly::{Monomial, MultiPoly, PolyRing};
pub use ratfn::RationalFn;
pub use rational::{GaussRat, Q};

use std::sync::atomic::{AtomicUsize, Ordering};

/// Default ceiling on the number of terms in any intermediate polynomial.
pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

static TERM_BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_TERM_BUDGET);

pub fn term_budget() -> usize {
    TERM_BUDGET.load(Ordering::Relaxed)
}

pub fn set_term_budget(n: usize) {
    TERM_BUDGET.store(n.max(1), Ordering::Relaxed);
}

/// Coefficient type usable inside symmetric tensors and linear combinations.
pub trait Coeff:
    Clone
    + std::fmt::Debug
    + PartialEq
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Neg<Output = Self>
    + for<'a> std::ops::Mul<&'a Self, Output = Self>
{
    fn zero_coeff() -> Self;
    fn from_q(q: &Q) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn scale(&self, q: &Q) -> Self;
    /// Size measure used for budget checks.
    fn term_count(&self) -> usize {
        1
    }
}

impl Coeff for Q {
    fn zero_coeff() -> Self {
        num_traits::Zero::zero()
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn is_zero_coeff(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn scale(&self, q: &Q) -> Self {
        self * q
    }
}

impl Coeff for f64 {
    fn zero_coeff() -> Self {
        0.0
    }
    fn from_q(q: &Q) -> Self {
        rational::to_f64(q)
    }
    fn is_zero_coeff(&self) -> bool {
        *self == 0.0
    }
    fn scale(&self, q: &Q) -> Self {
        self * rational::to_f64(q)
    }
}
