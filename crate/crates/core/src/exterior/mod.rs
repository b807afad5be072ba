//! Exact multilinear algebra over a fixed basis plus a floating-point
//! metric/Hodge pipeline.

mod form;
mod metric;
mod vform;

pub use form::{indices_of, mask_of, merge_sign, sort_with_sign, Form, KForm, Mask, RealForm, MAX_DIM};
pub use metric::{hodge, hodge_standard, j_pullback, metric_and_hodge, type_split, Metric, TypeSplit, DEFAULT_TOL};
pub use vform::{kappa_wedge, VForm, ValueSpace};

use thiserror::Error;

use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("value space has dimension {0} but {1} components were given")]
    ValueDimension(usize, usize),
    #[error("value space is not embedded in the ambient algebra")]
    NotEmbedded,
    #[error("metric is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("J does not square to -id")]
    NotComplexStructure,
    #[error("2-form is degenerate")]
    Degenerate,
    #[error("dimension {0} is odd")]
    OddDimension(usize),
    #[error("form involves index {0} outside the requested support")]
    Support(usize),
}

/// Free-function form of [`Form::wedge`].
pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm, ExteriorError> {
    a.try_wedge(b)
}

/// Free-function form of [`Form::interior`].
pub fn interior(v: &[crate::scalar::Scalar], a: &KForm) -> KForm {
    a.interior(v)
}

/// Free-function form of [`Form::endo_action`].
pub fn endo_action(f: &Matrix, a: &KForm) -> KForm {
    a.endo_action(f)
}

/// Free-function form of [`Form::pullback`].
pub fn pullback(l: &Matrix, a: &KForm) -> KForm {
    a.pullback(l)
}

/// Free-function form of [`VForm::kappa`].
pub fn kappa(w: &VForm) -> Result<KForm, ExteriorError> {
    w.kappa()
}
