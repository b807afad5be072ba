//! Shear constructions for Lie algebras with exact parametric arithmetic.
//!
//! The crate builds Abelian extensions and their shear quotients from shear
//! data `(ξ, a, ω, η)`, transfers invariant forms, brackets and almost complex
//! structures across a shear, inverts shears and abelianizes solvable
//! algebras. On top of that sit checkers and constructors for calibrated and
//! cocalibrated G2-structures and almost semi-Kähler structures on almost
//! Abelian Lie algebras.
//!
//! Everything is exact over [`scalar::Scalar`] except the metric/Hodge
//! pipeline, which uses `f64`.

pub mod corpus;
pub mod datasets;
pub mod exterior;
pub mod geom_g2;
pub mod lie;
pub mod linalg;
pub mod notation;
pub mod par;
pub mod reproduce;
pub mod scalar;
pub mod shear;

pub use scalar::{Assignment, Instantiate, Scalar};
