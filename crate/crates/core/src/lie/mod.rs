//! Lie algebras by structure constants.
//!
//! Sign convention throughout: `dα(X,Y) = -α([X,Y])` on 1-forms, so a
//! differential `de^k = Σ c e^{ij}` encodes `[e_i,e_j] = -Σ_k c^k_ij e_k`.

mod algebra;
mod connection;
mod series;
mod subspace;

pub use algebra::{ce_differential, ce_differential_with, jacobi_check, JacobiReport, LieAlgebra};
pub use connection::{dN, d_nabla, Connection};
pub use series::{
    bracket_span, center, characteristic_series, derivations, derived_length, derived_series, direct_sum, is_abelian_ideal, is_ideal,
    semidirect,
    quotient, CharacteristicSeries, Quotient,
};
pub use subspace::Subspace;

use thiserror::Error;

use crate::exterior::ExteriorError;
use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("invalid bracket data: {0}")]
    InvalidBracket(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("complement does not split the ideal")]
    BadComplement,
}
