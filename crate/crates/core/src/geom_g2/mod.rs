//! G2-structures on seven-dimensional algebras, their SU(3) reductions on
//! almost Abelian algebras, and the shear families preserving closedness.

mod almost_abelian;
mod families;
mod h3r3;
mod semi_kahler;
mod structure;

use thiserror::Error;

use crate::exterior::{ExteriorError, KForm, Mask};
use crate::lie::{LieError, Subspace};
use crate::linalg::{dot, LinalgError, Matrix, Vector};
use crate::scalar::{Instantiate, Scalar};
use crate::shear::ShearError;

pub use almost_abelian::{aa_build_data, aa_closedness_check, aa_remaining_condition, AaShear, AlmostAbelian, ClosednessReport};
pub use families::{cal_nu_family, cocal_nu_family, CalCase, CocalCase, NuFamily};
pub use h3r3::{check_cal_h3r3, H3R3Case, H3R3Report};
pub use semi_kahler::{semi_kahler_check, semi_kahler_shear_conditions, SemiKahlerReport, SkShearReport};
pub use structure::{g2_b_matrix, g2_metric, is_calibrated, is_cocalibrated, su3_split, G2Structure, SU3Split};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Shear(#[from] ShearError),
    #[error("{0}")]
    Shape(String),
    #[error("not a G2 structure: {0}")]
    NotG2(String),
    #[error("coefficients depend on parameters: {0}")]
    Parametric(String),
    #[error("basis is not adapted: {0}")]
    NotAdapted(String),
    #[error("given dual 4-form disagrees with the Hodge dual (deviation {0:e})")]
    StarMismatch(f64),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("form is not closed on the base algebra")]
    NotClosed,
}

impl From<crate::scalar::ScalarError> for GeomError {
    fn from(e: crate::scalar::ScalarError) -> Self {
        GeomError::Parametric(e.to_string())
    }
}

fn hyp(cond: bool, what: &str) -> Result<(), GeomError> {
    if cond {
        Ok(())
    } else {
        Err(GeomError::Hypothesis(what.to_string()))
    }
}

/// Coefficients over every basis mask of the form's degree, in mask order.
pub(crate) fn form_vector(f: &KForm) -> Vec<Scalar> {
    let n = f.dim();
    let k = f.degree() as u32;
    (0..(1u64 << n) as Mask).filter(|m| m.count_ones() == k).map(|m| f.coeff_mask(m)).collect()
}

/// Components `c^b` with `comps[i] = Σ_b c^b basis[b][i]`.
pub(crate) fn coords_in_basis(comps: &[KForm], basis: &[Vector]) -> Result<Vec<KForm>, GeomError> {
    let n = comps.len();
    let b = Matrix::from_columns(n, basis);
    let left = b.transpose().mul(&b).inverse()?.mul(&b.transpose());
    let dim = comps.first().map(KForm::dim).unwrap_or(0);
    let deg = comps.first().map(KForm::degree).unwrap_or(0);
    let out: Vec<KForm> = (0..basis.len())
        .map(|r| {
            let mut acc = KForm::zero(dim, deg);
            for (i, c) in comps.iter().enumerate() {
                let s = left.get(r, i);
                if !s.is_zero() {
                    acc = &acc + &c.scale(s);
                }
            }
            acc
        })
        .collect();
    for (i, c) in comps.iter().enumerate() {
        let mut back = KForm::zero(dim, deg);
        for (r, o) in out.iter().enumerate() {
            if !basis[r][i].is_zero() {
                back = &back + &o.scale(&basis[r][i]);
            }
        }
        if &back != c {
            return Err(GeomError::Hypothesis("values do not lie in the given subspace".into()));
        }
    }
    Ok(out)
}

/// `Σ_j v_j ⊗ w_j^T`-style builder: the matrix sending `basis[c]` to `images[c]`.
pub(crate) fn map_from_images(n: usize, basis: &[Vector], images: &[Vector]) -> Result<Matrix, GeomError> {
    let b = Matrix::from_columns(n, basis);
    let im = Matrix::from_columns(n, images);
    Ok(im.mul(&b.inverse().map_err(|_| GeomError::Shape("basis for the map is not a basis".into()))?))
}

/// Affine solutions `ν ∈ Hom(domain, target)` of `L(ν) = rhs`, as least-norm particular plus kernel.
pub(crate) fn solve_maps(
    n: usize,
    domain: &[usize],
    target: &Subspace,
    linear: &dyn Fn(&Matrix) -> Vec<Scalar>,
    rhs: &[Scalar],
) -> Result<(Matrix, Vec<Matrix>), GeomError> {
    let mut elems = Vec::new();
    for t in target.basis() {
        for &j in domain {
            let mut m = Matrix::zeros(n, n);
            for (i, ti) in t.iter().enumerate() {
                m.set(i, j, ti.clone());
            }
            elems.push(m);
        }
    }
    let cols: Vec<Vector> = elems.iter().map(|e| linear(e)).collect();
    let rows = rhs.len();
    let sys = Matrix::from_columns(rows, &cols);
    let combine = |t: &[Scalar]| {
        let mut m = Matrix::zeros(n, n);
        for (c, e) in t.iter().zip(&elems) {
            if !c.is_zero() {
                m = m.add(&e.scale(c));
            }
        }
        m
    };
    let (x, kernel) = if elems.is_empty() {
        if rhs.iter().any(|r| !r.is_zero()) {
            return Err(LinalgError::Inconsistent.into());
        }
        (Vec::new(), Vec::new())
    } else {
        sys.solve_least_norm(rhs)?
    };
    Ok((combine(&x), kernel.iter().map(|k| combine(k)).collect()))
}

fn norm2(v: &[Scalar]) -> Scalar {
    dot(v, v)
}

/// `λ` with `r = λ t` for a constant `λ`, if it exists.
fn proportional(r: &Scalar, t: &Scalar) -> Option<Scalar> {
    let (m, c) = t.terms().next()?;
    let lam = Scalar::from_rational(r.terms().find(|(mm, _)| *mm == m).map(|(_, x)| x.clone()).unwrap_or_else(num_traits::Zero::zero) / c);
    (&lam * t == *r).then_some(lam)
}

/// Ambient vectors `ω(e_p, e_q)` for an ambient-component family.
fn image_vectors(comps: &[KForm]) -> Vec<Vector> {
    let n = comps.first().map(KForm::dim).unwrap_or(0);
    let mut out = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let v: Vector = comps.iter().map(|c| c.coeff(&[p, q])).collect();
            if v.iter().any(|s| !s.is_zero()) {
                out.push(v);
            }
        }
    }
    out
}

/// A fixed point away from the special parameter values of `comps`.
fn generic_point(comps: &[KForm]) -> crate::scalar::Assignment {
    let mut names = std::collections::BTreeSet::new();
    for c in comps {
        for (_, s) in c.masks() {
            names.extend(s.params());
        }
    }
    let mut a = crate::scalar::Assignment::new();
    for (k, name) in names.iter().enumerate() {
        a.set(name, Scalar::ratio(37 + 11 * k as i64, 13));
    }
    a
}

/// Image of `ω₀`; parametric ranks are decided at a generic point and the
/// resulting constant subspace is then checked exactly.
fn image_of(comps: &[KForm]) -> Result<Subspace, GeomError> {
    let n = comps.len();
    let vs = image_vectors(comps);
    match Subspace::span(n, &vs) {
        Err(LinalgError::ParametricPivot(_)) => {
            let g = generic_point(comps);
            let inst: Vec<KForm> = comps.iter().map(|c| c.instantiate(&g)).collect();
            let s = Subspace::span(n, &image_vectors(&inst))?;
            if vs.iter().all(|v| s.contains(v)) {
                Ok(s)
            } else {
                Err(GeomError::Parametric("image of omega0 depends on the parameters".into()))
            }
        }
        other => Ok(other?),
    }
}

/// Kernel inside `restrict`, with the same generic fallback as [`image_of`].
fn kernel_of(comps: &[KForm], restrict: &Subspace) -> Result<Subspace, GeomError> {
    match kernel_exact(comps, restrict) {
        Err(GeomError::Linalg(LinalgError::ParametricPivot(_))) => {
            let g = generic_point(comps);
            let inst: Vec<KForm> = comps.iter().map(|c| c.instantiate(&g)).collect();
            let s = kernel_exact(&inst, restrict)?;
            if s.basis().iter().all(|v| comps.iter().all(|c| c.interior(v).is_zero())) {
                Ok(s)
            } else {
                Err(GeomError::Parametric("kernel of omega0 depends on the parameters".into()))
            }
        }
        other => other,
    }
}

/// Vectors `Y ∈ restrict` with `Y ⌟ comps[i] = 0` for all `i`.
fn kernel_exact(comps: &[KForm], restrict: &Subspace) -> Result<Subspace, GeomError> {
    let n = restrict.ambient();
    let mut rows: Vec<Vector> = Vec::new();
    for c in comps {
        for q in 0..n {
            rows.push((0..n).map(|p| c.coeff(&[p, q])).collect());
        }
    }
    for v in restrict.orthogonal_complement()?.basis() {
        rows.push(v.clone());
    }
    let m = Matrix::from_rows(&rows);
    Ok(Subspace::span(n, &m.nullspace()?)?)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::exterior::{KForm, VForm, ValueSpace};
    use crate::linalg::{unit_vector, Matrix, Vector};
    use crate::notation::{parse_form, parse_vector};

    pub fn omega0(n: usize, terms: &[(&str, &str)]) -> VForm {
        let mut comps = vec![KForm::zero(n, 2); n];
        for (f, v) in terms {
            let f = parse_form(f, n).unwrap();
            let v = parse_vector(v, n).unwrap();
            for i in 0..n {
                comps[i] = &comps[i] + &f.scale(&v[i]);
            }
        }
        let basis: Vec<Vector> = (0..n).map(|i| unit_vector(n, i)).collect();
        VForm::new(ValueSpace::embedded("g", basis), comps).unwrap()
    }

    pub fn nu(n: usize, cols: &[(usize, &str)]) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for (j, v) in cols {
            let v = parse_vector(v, n).unwrap();
            for i in 0..n {
                m.set(i, j - 1, v[i].clone());
            }
        }
        m
    }

    pub fn phi_cal() -> KForm {
        parse_form("127+347+567+135-146-236-245", 7).unwrap()
    }

    pub fn phi_cocal() -> KForm {
        parse_form("126-135-147+234-257-367-456", 7).unwrap()
    }

    pub fn star_cocal() -> KForm {
        parse_form("1425+1436+2536+1237-1567+2467-3457", 7).unwrap()
    }
}
