use nalgebra::DMatrix;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::form::{indices_of, merge_sign, Form, KForm, Mask, RealForm};
use super::ExteriorError;

/// Default relative tolerance of the floating-point pipeline.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Positive definite inner product with an orientation sign.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    g: DMatrix<f64>,
    orientation: i8,
}

impl Metric {
    pub fn new(g: DMatrix<f64>, orientation: i8, tol: f64) -> Result<Self, ExteriorError> {
        if !g.is_square() {
            return Err(ExteriorError::NotPositiveDefinite("non-square".into()));
        }
        let scale = g.amax().max(1.0);
        if (&g - g.transpose()).amax() > tol * scale {
            return Err(ExteriorError::NotPositiveDefinite("not symmetric".into()));
        }
        for k in 1..=g.nrows() {
            let minor = g.view((0, 0), (k, k)).determinant();
            if minor <= tol * scale.powi(k as i32) {
                return Err(ExteriorError::NotPositiveDefinite(format!("leading minor {k} is {minor:e}")));
            }
        }
        Ok(Metric { g, orientation: if orientation < 0 { -1 } else { 1 } })
    }

    pub fn identity(n: usize) -> Self {
        Metric { g: DMatrix::identity(n, n), orientation: 1 }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                s += u[i] * self.g[(i, j)] * v[j];
            }
        }
        s
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        (&self.g - DMatrix::<f64>::identity(self.dim(), self.dim())).amax() <= tol
    }
}

fn sub_det(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    if k == 0 {
        return 1.0;
    }
    DMatrix::from_fn(k, k, |i, j| m[(rows[i], cols[j])]).determinant()
}

/// Hodge star with `vol = orientation * sqrt(det g) e^{1..n}`.
pub fn hodge(metric: &Metric, alpha: &RealForm) -> Result<RealForm, ExteriorError> {
    let n = metric.dim();
    if alpha.dim() != n {
        return Err(ExteriorError::DimensionMismatch(n, alpha.dim()));
    }
    let ginv = metric
        .g
        .clone()
        .try_inverse()
        .ok_or_else(|| ExteriorError::NotPositiveDefinite("singular".into()))?;
    let vol = metric.g.determinant().sqrt() * metric.orientation as f64;
    let k = alpha.degree();
    let full: Mask = ((1u64 << n) - 1) as Mask;
    let mut out = Form::zero(n, n - k);
    let subsets: Vec<Mask> = (0..=full).filter(|m: &Mask| m.count_ones() as usize == k).collect();
    for &i_mask in &subsets {
        let rows = indices_of(i_mask);
        // raised component α^I = Σ_J det(g^{-1}[I,J]) α_J
        let mut raised = 0.0;
        for (j_mask, c) in alpha.masks() {
            raised += sub_det(&ginv, &rows, &indices_of(j_mask)) * c;
        }
        if raised == 0.0 {
            continue;
        }
        let comp = full & !i_mask;
        let sign = merge_sign(i_mask, comp) as f64;
        out.add_to_mask(comp, raised * sign * vol);
    }
    Ok(out)
}

/// Exact Hodge star for the standard inner product and orientation `e^{1..n}`.
pub fn hodge_standard<C: crate::scalar::Coeff>(alpha: &Form<C>) -> Form<C> {
    let n = alpha.dim();
    let full: Mask = ((1u64 << n) - 1) as Mask;
    let mut out = Form::zero(n, n - alpha.degree());
    for (m, c) in alpha.masks() {
        let comp = full & !m;
        let c = if merge_sign(m, comp) < 0 { c.negated() } else { c.clone() };
        out.add_to_mask(comp, c);
    }
    out
}

/// Same as [`hodge`]; named after the combined operation.
pub fn metric_and_hodge(metric: &Metric, alpha: &RealForm) -> Result<RealForm, ExteriorError> {
    hodge(metric, alpha)
}

/// Decomposition of a 2-form against an almost Hermitian structure `(J, σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeSplit {
    /// `c` with trace part `c·σ`.
    pub trace_coeff: Scalar,
    pub trace: KForm,
    pub primitive11: KForm,
    pub two_zero: KForm,
}

/// `β(J·,J·)`, written `J*β`.
pub fn j_pullback(beta: &KForm, j: &Matrix) -> KForm {
    beta.pullback(j)
}

/// Splits `β = c σ + β₀ + β₂₀` with `β₀` primitive of type (1,1) and `β₂₀` of type (2,0)+(0,2).
pub fn type_split(beta: &KForm, j: &Matrix, sigma: &KForm) -> Result<TypeSplit, ExteriorError> {
    let n = beta.dim();
    if beta.degree() != 2 || sigma.degree() != 2 || sigma.dim() != n {
        return Err(ExteriorError::DegreeMismatch(2, beta.degree()));
    }
    if n % 2 != 0 {
        return Err(ExteriorError::OddDimension(n));
    }
    if j.mul(j) != Matrix::identity(n).neg() {
        return Err(ExteriorError::NotComplexStructure);
    }
    let m = n / 2;
    let top = sigma.power(m).top_coeff();
    if top.is_zero() || !top.is_constant() {
        return Err(ExteriorError::Degenerate);
    }
    let half = Scalar::ratio(1, 2);
    let jb = j_pullback(beta, j);
    let b11 = (beta + &jb).scale(&half);
    let b20 = (beta - &jb).scale(&half);
    let num = b11.wedge(&sigma.power(m - 1)).top_coeff();
    let c = num.checked_div(&top).map_err(|_| ExteriorError::Degenerate)?;
    let trace = sigma.scale(&c);
    let primitive11 = &b11 - &trace;
    Ok(TypeSplit { trace_coeff: c, trace, primitive11, two_zero: b20 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: usize, terms: &[(&[usize], f64)]) -> RealForm {
        let mut f = Form::zero(n, terms[0].0.len());
        for (idx, c) in terms {
            f.add_term(idx, *c);
        }
        f
    }

    #[test]
    fn hodge_of_basis_form() {
        let m = Metric::identity(7);
        let a = rf(7, &[(&[0, 1, 2], 1.0)]);
        assert_eq!(hodge(&m, &a).unwrap(), rf(7, &[(&[3, 4, 5, 6], 1.0)]));
        let e1 = rf(7, &[(&[0], 1.0)]);
        assert_eq!(hodge(&m, &hodge(&m, &e1).unwrap()).unwrap(), e1);
    }

    #[test]
    fn hodge_respects_scaling() {
        // g = 4 id in dim 2: *e^1 = sqrt(det g) g^{11} e^2 = 4 * 1/4 e^2
        let m = Metric::new(DMatrix::identity(2, 2) * 4.0, 1, 1e-9).unwrap();
        let out = hodge(&m, &rf(2, &[(&[0], 1.0)])).unwrap();
        assert!((out.coeff(&[1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_rejected() {
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        assert!(Metric::new(g, 1, 1e-9).is_err());
    }

    fn standard_j6() -> Matrix {
        // σ = 12+34+56, J e2 = e1, J e1 = -e2, ...
        let mut j = Matrix::zeros(6, 6);
        for p in 0..3 {
            j.set(2 * p, 2 * p + 1, Scalar::one());
            j.set(2 * p + 1, 2 * p, Scalar::int(-1));
        }
        j
    }

    fn sigma6() -> KForm {
        &(&KForm::basis(6, &[0, 1]) + &KForm::basis(6, &[2, 3])) + &KForm::basis(6, &[4, 5])
    }

    #[test]
    fn type_split_of_sigma_is_trace() {
        let s = type_split(&sigma6(), &standard_j6(), &sigma6()).unwrap();
        assert_eq!(s.trace, sigma6());
        assert!(s.primitive11.is_zero() && s.two_zero.is_zero());
    }

    #[test]
    fn type_split_of_anti_invariant_form() {
        let b = &KForm::basis(6, &[0, 2]) - &KForm::basis(6, &[1, 3]);
        let s = type_split(&b, &standard_j6(), &sigma6()).unwrap();
        assert_eq!(s.two_zero, b);
        assert!(s.trace.is_zero() && s.primitive11.is_zero());
    }

    #[test]
    fn type_split_rejects_non_complex() {
        let r = type_split(&sigma6(), &Matrix::identity(6), &sigma6());
        assert_eq!(r, Err(ExteriorError::NotComplexStructure));
    }
}
