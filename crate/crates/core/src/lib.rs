//! Finite-rank models of loop-group spinor calculus.
//!
//! The crate is organized around five subsystems:
//!
//! - [`rootsys`] — exact (rational) root-system and affine Weyl combinatorics,
//!   Weyl denominator identity, dual Coxeter numbers.
//! - [`cliffspin`] — finite-dimensional Clifford algebras, spinor modules over
//!   exterior algebras, implementers of orthogonal maps, torus weights.
//! - [`symplin`] — symplectic linear algebra: compatible complex structures,
//!   the interpolation `J_t = K_t(-K_t^2)^{-1/2}`, metric isometries, and the
//!   polar retraction of the symplectic group onto a unitary group.
//! - [`loopmodel`] — Fourier-truncated loop algebras with Sobolev weights:
//!   the operators `∂_μ`, `J_μ`, `D_μ`, smoothed cutoffs `χ(∂_μ)`, the
//!   coadjoint 2-form, and the Kac–Peterson cocycle.
//! - [`pathgeom`] — discretized path spaces over SU(2)/SU(3): the 2-form `ϖ`,
//!   its twisted variant, the Cartan 3-form, and finite-difference checks of
//!   the structure identities relating them.
//!
//! All floating-point checks are seeded and deterministic; all rootsys
//! computations are exact. See the crate-level tests for the acceptance
//! identities each subsystem is expected to satisfy.

pub mod cliffspin;
pub mod linalg;
pub mod loopmodel;
pub mod pathgeom;
pub mod rootsys;
pub mod symplin;

pub use cliffspin::{ComplexStructureOperator, EuclideanSpace, SpinorModule, TorusAction};
pub use loopmodel::{CompactLieAlgebra, LoopOperator, SobolevWeight, TruncatedLoop};
pub use pathgeom::{Automorphism, DiscretePath, MatrixGroup, TangentVariation};
pub use rootsys::{
    AffineRoot, AffineWeylElement, LaurentCharacter, LieType, RootSystem, WeylElement,
};
pub use symplin::{MetricPair, RetractionPath, SymplecticForm};
