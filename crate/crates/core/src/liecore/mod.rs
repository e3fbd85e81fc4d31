//! Root systems, Chevalley bases, diagram automorphisms and folding.

pub mod automorphism;
pub mod chevalley;
pub mod fold;
pub mod roots;

pub use automorphism::{lift_automorphism, DiagramAutomorphism, LieAutomorphism};
pub use chevalley::{chevalley_algebra, BasisLabel, LieAlgebra};
pub use fold::{check_g0_abelian, classify_cartan, fold, FoldedDatum, G0Report};
pub use roots::{build_root_system, CartanType, Family, RootSystem};
