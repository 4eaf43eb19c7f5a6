//! Quantum sample spaces built from projective decompositions of the identity.
//!
//! The crate is layered bottom-up:
//!
//! - [`numerics`]: dense complex matrices, kets, a Jacobi eigensolver.
//! - [`projective`]: projectors, PDIs, negation and commuting-only conjunction.
//! - [`frameworks`]: Born probabilities, event algebras, compatibility,
//!   common refinement and the single-framework guard.
//! - [`histories`]: history families, chain operators, decoherence functional.
//! - [`scenarios`]: one-qubit channels and their certification, teleportation
//!   in two incompatible frameworks.

pub mod frameworks;
pub mod histories;
pub mod numerics;
pub mod projective;
pub mod scenarios;

pub use numerics::{ComplexMatrix, Ket, Tolerances, C64};
