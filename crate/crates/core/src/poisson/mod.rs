//! Numerical Poisson transform on `S^n`, its PDE certificate, and the
//! two-branch weak expansion of boundary pairings.

pub mod asymptotic;
pub mod quadrature;
pub mod residual;
pub mod transform;

pub use asymptotic::{asymptotic_fit, boundary_pairings, dichotomy_bumps, Bump, FitConfig, FitResult};
pub use quadrature::{sphere_volume, QuadratureGrid};
pub use residual::{pde_residual, random_points, PointResidual, ResidualStats};
pub use transform::{
    equivariance_residual, fiber_integrand, fiber_pushforward, poisson_transform, poisson_transform_estimated,
    twisted_pullback, BoundaryField, TransformValue,
};
