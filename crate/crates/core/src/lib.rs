//! Exact computations with equivariant map algebras `(𝔤 ⊗ A)^Γ`, their local
//! Weyl modules, and the commutative algebra acting on highest weight spaces.

pub mod ema;
pub mod gammaring;
pub mod liecore;
pub mod linalg;
pub mod rational;
pub mod scalar;
pub mod scenario;
pub mod weylalg;
pub mod weylmod;

pub use rational::Rat;
pub use scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("invalid simple type {0}")]
    InvalidType(String),
    #[error("not a diagram automorphism: {0}")]
    NotAutomorphism(String),
    #[error("no choice of signs makes the lift bracket-preserving")]
    SignObstruction,
    #[error("antisymmetry fails on basis pair ({0}, {1})")]
    Antisymmetry(usize, usize),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
}
