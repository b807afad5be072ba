use crate::exterior::{hodge, hodge_standard, KForm, Metric, RealForm};
use crate::lie::{ce_differential, ce_differential_with, LieAlgebra, Subspace};
use crate::linalg::{q, unit_vector, Matrix};
use crate::scalar::Scalar;

use super::GeomError;

/// `B_ij` with `(e_i⌟φ)∧(e_j⌟φ)∧φ = 6 B_ij e^{1..7}`.
pub fn g2_b_matrix(phi: &KForm) -> Result<Matrix, GeomError> {
    if phi.dim() != 7 || phi.degree() != 3 {
        return Err(GeomError::Shape(format!("expected a 3-form in dimension 7, got degree {} in dimension {}", phi.degree(), phi.dim())));
    }
    let ints: Vec<KForm> = (0..7).map(|i| phi.interior_basis(i)).collect();
    let sixth = q(1, 6);
    let mut b = Matrix::zeros(7, 7);
    for i in 0..7 {
        for j in i..7 {
            let v = ints[i].wedge(&ints[j]).wedge(phi).top_coeff().scale(&sixth);
            b.set(i, j, v.clone());
            b.set(j, i, v);
        }
    }
    Ok(b)
}

/// Metric `g = det(B)^{-1/9} B` induced by a G2 3-form.
pub fn g2_metric(phi: &KForm, tol: f64) -> Result<Metric, GeomError> {
    let b = g2_b_matrix(phi)?;
    metric_from_b(&b, tol)
}

fn metric_from_b(b: &Matrix, tol: f64) -> Result<Metric, GeomError> {
    let bf = b.to_f64().ok_or_else(|| GeomError::Parametric("the 3-form must have numeric coefficients".into()))?;
    let det = bf.determinant();
    if det <= 0.0 {
        return Err(GeomError::NotG2(format!("det B = {det:e} is not positive")));
    }
    Metric::new(bf * det.powf(-1.0 / 9.0), 1, tol).map_err(|e| GeomError::NotG2(e.to_string()))
}

/// A G2 3-form with its metric and Hodge dual.
#[derive(Clone, Debug)]
pub struct G2Structure {
    phi: KForm,
    b: Matrix,
    metric: Metric,
    star: RealForm,
    star_exact: Option<KForm>,
}

impl G2Structure {
    /// `star` is an optional exact `*φ`; it is checked against the numeric dual.
    pub fn new(phi: &KForm, star: Option<&KForm>, tol: f64) -> Result<Self, GeomError> {
        let b = g2_b_matrix(phi)?;
        let metric = metric_from_b(&b, tol)?;
        let phi_f = phi.to_f64().ok_or_else(|| GeomError::Parametric("the 3-form must have numeric coefficients".into()))?;
        let star_num = hodge(&metric, &phi_f)?;
        let star_exact = if b == Matrix::identity(7) {
            let s = hodge_standard(phi);
            if let Some(given) = star {
                if given != &s {
                    let gf = given.to_f64().ok_or_else(|| GeomError::Parametric("dual 4-form".into()))?;
                    return Err(GeomError::StarMismatch(gf.max_abs_diff(&star_num)));
                }
            }
            Some(s)
        } else if let Some(given) = star {
            let gf = given.to_f64().ok_or_else(|| GeomError::Parametric("dual 4-form".into()))?;
            let dev = gf.max_abs_diff(&star_num);
            if dev > tol * star_num.max_abs().max(1.0) {
                return Err(GeomError::StarMismatch(dev));
            }
            Some(given.clone())
        } else {
            None
        };
        Ok(G2Structure { phi: phi.clone(), b, metric, star: star_num, star_exact })
    }

    pub fn phi(&self) -> &KForm {
        &self.phi
    }

    pub fn b_matrix(&self) -> &Matrix {
        &self.b
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn star_numeric(&self) -> &RealForm {
        &self.star
    }

    /// Exact `*φ`, available for the standard metric or when supplied.
    pub fn star_exact(&self) -> Option<&KForm> {
        self.star_exact.as_ref()
    }

    pub fn has_standard_metric(&self) -> bool {
        self.b == Matrix::identity(7)
    }
}

/// `dφ = 0`, exactly.
pub fn is_calibrated(g: &LieAlgebra, phi: &KForm) -> bool {
    ce_differential(g, phi).is_zero()
}

/// `d*φ = 0`; exact when `*φ` is known exactly, otherwise to relative tolerance `tol`.
pub fn is_cocalibrated(g: &LieAlgebra, phi: &KForm, star: Option<&KForm>, tol: f64) -> Result<bool, GeomError> {
    let s = G2Structure::new(phi, star, tol)?;
    if let Some(st) = s.star_exact() {
        return Ok(ce_differential(g, st).is_zero());
    }
    let des = g
        .differentials()
        .iter()
        .map(KForm::to_f64)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| GeomError::Parametric("numeric Hodge dual needs numeric structure constants".into()))?;
    let d = ce_differential_with(&des, s.star_numeric());
    Ok(d.max_abs() <= tol * s.star_numeric().max_abs().max(1.0))
}

/// SU(3)-structure `(σ, ρ, ρ̂, J)` induced on a codimension-one coordinate hyperplane.
#[derive(Clone, Debug, PartialEq)]
pub struct SU3Split {
    x: usize,
    sigma: KForm,
    rho: KForm,
    rho_hat: KForm,
    j: Matrix,
}

/// Splits `φ = σ∧α + ρ` and `*φ = σ²/2 + ρ̂∧α` for `u` orthogonal to `X`.
///
/// Only adapted bases are supported: the metric must be the identity,
/// `u` a coordinate hyperplane and `X` the missing basis vector.
pub fn su3_split(s: &G2Structure, u: &Subspace, x: &[Scalar]) -> Result<SU3Split, GeomError> {
    if !s.has_standard_metric() {
        return Err(GeomError::NotAdapted("the induced metric is not the identity".into()));
    }
    let n = 7;
    let m = (0..n)
        .find(|&i| x == unit_vector(n, i).as_slice())
        .ok_or_else(|| GeomError::NotAdapted("X must be a basis vector".into()))?;
    let others: Vec<usize> = (0..n).filter(|&i| i != m).collect();
    if u.ambient() != n || !u.same_as(&Subspace::coordinate(n, &others)) {
        return Err(GeomError::NotAdapted("u must be the coordinate hyperplane orthogonal to X".into()));
    }
    let phi = s.phi();
    let star = s.star_exact().expect("standard metric has an exact dual");
    let sigma = phi.interior_basis(m);
    let rho = phi.without_index(m);
    let rho_hat = -star.interior_basis(m);
    let alpha = KForm::basis(n, &[m]);
    debug_assert_eq!(&(&sigma.wedge(&alpha) + &rho), phi);
    debug_assert_eq!(&(&sigma.power(2).scale(&Scalar::ratio(1, 2)) + &rho_hat.wedge(&alpha)), star);
    let j = Matrix::from_fn(n, n, |i, k| sigma.coeff(&[i, k]));
    let mut minus_id = Matrix::identity(n).neg();
    minus_id.set(m, m, Scalar::zero());
    if j.mul(&j) != minus_id {
        return Err(GeomError::NotAdapted("X⌟φ does not induce a complex structure on u".into()));
    }
    Ok(SU3Split { x: m, sigma, rho, rho_hat, j })
}

impl SU3Split {
    /// Index of `X`.
    pub fn x(&self) -> usize {
        self.x
    }

    pub fn u_indices(&self) -> Vec<usize> {
        (0..7).filter(|&i| i != self.x).collect()
    }

    pub fn sigma(&self) -> &KForm {
        &self.sigma
    }

    /// The 3-form part of `φ`.
    pub fn rho(&self) -> &KForm {
        &self.rho
    }

    /// `-X⌟*φ`, the 3-form part of `*φ`.
    pub fn rho_hat(&self) -> &KForm {
        &self.rho_hat
    }

    /// `J e_j = Σ_i σ(e_i, e_j) e_i`, zero on `X`.
    pub fn j(&self) -> &Matrix {
        &self.j
    }

    pub fn alpha(&self) -> KForm {
        KForm::basis(7, &[self.x])
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::notation::{parse_algebra, parse_form};

    #[test]
    fn standard_forms_have_identity_metric() {
        for phi in [phi_cal(), phi_cocal()] {
            assert_eq!(g2_b_matrix(&phi).unwrap(), Matrix::identity(7));
            assert!(g2_metric(&phi, 1e-12).unwrap().is_identity(1e-12));
        }
    }

    #[test]
    fn exact_dual_matches_numeric() {
        let s = G2Structure::new(&phi_cocal(), Some(&star_cocal()), 1e-9).unwrap();
        let st = s.star_exact().unwrap().to_f64().unwrap();
        assert!(st.max_abs_diff(s.star_numeric()) < 1e-12);
        let wrong = parse_form("1425+1436", 7).unwrap();
        assert!(matches!(G2Structure::new(&phi_cocal(), Some(&wrong), 1e-9), Err(GeomError::StarMismatch(_))));
    }

    #[test]
    fn scaled_form_metric() {
        let phi = phi_cal().scale(&Scalar::int(2));
        let m = g2_metric(&phi, 1e-12).unwrap();
        let expect = 2f64.powf(2.0 / 3.0);
        assert!((m.matrix()[(0, 0)] - expect).abs() < 1e-12);
        let neg = phi_cal().scale(&Scalar::int(-1));
        assert!(matches!(g2_metric(&neg, 1e-9), Err(GeomError::NotG2(_))));
    }

    #[test]
    fn splits() {
        let s = G2Structure::new(&phi_cal(), None, 1e-9).unwrap();
        let sp = su3_split(&s, &Subspace::coordinate(7, &[0, 1, 2, 3, 4, 5]), &unit_vector(7, 6)).unwrap();
        assert_eq!(sp.sigma(), &parse_form("12+34+56", 7).unwrap());
        assert_eq!(sp.rho(), &parse_form("135-146-236-245", 7).unwrap());
        let c = G2Structure::new(&phi_cocal(), Some(&star_cocal()), 1e-9).unwrap();
        let sp = su3_split(&c, &Subspace::coordinate(7, &[0, 1, 2, 3, 4, 5]), &unit_vector(7, 6)).unwrap();
        assert_eq!(sp.sigma(), &parse_form("-14-25-36", 7).unwrap());
        assert_eq!(sp.rho_hat(), &parse_form("123-156+246-345", 7).unwrap());
        assert!(su3_split(&c, &Subspace::coordinate(7, &[0, 1, 2, 3, 4, 6]), &unit_vector(7, 6)).is_err());
    }

    #[test]
    fn closedness_of_examples() {
        let g = parse_algebra("(a1.17,a2.27,a3.37,-a1.47,-a2.57,-a3.67,0)").unwrap();
        assert!(is_cocalibrated(&g, &phi_cocal(), Some(&star_cocal()), 1e-9).unwrap());
        assert!(!is_calibrated(&g, &phi_cocal()));
        let h = parse_algebra("(a.17, a.27, b.37,b.47,(-a-b).57,(-a-b).67, 0)").unwrap();
        assert!(is_calibrated(&h, &phi_cal()));
        assert!(is_calibrated(&LieAlgebra::abelian(7), &phi_cal()));
        // numeric route for a non-standard metric
        let g = parse_algebra("(1.17,2.27,3.37,-1.47,-2.57,-3.67,0)").unwrap();
        let phi2 = phi_cocal().scale(&Scalar::int(2));
        assert!(is_cocalibrated(&g, &phi2, None, 1e-9).unwrap());
        assert!(!is_cocalibrated(&parse_algebra("(0,0,0,0,0,0,12)").unwrap(), &phi2, None, 1e-9).unwrap());
    }
}
