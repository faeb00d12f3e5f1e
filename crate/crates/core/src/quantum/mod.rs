//! Collar-coordinate operators near the conformal boundary, Jordan chains
//! and the log-cancellation identities, on an exact log-symbol algebra.

pub mod collar;
pub mod fd;
pub mod jordan;
pub mod symbol;

pub use collar::{CollarModel, EulerOperator, Field};
pub use jordan::{default_seed, jordan_build, phi, verify_phi_ansatz, JordanChain, PhiCheck, PhiReport};
pub use symbol::LogSymbol;
