use crate::exterior::{type_split, KForm, VForm, ValueSpace};
use crate::lie::{ce_differential, LieAlgebra};
use crate::linalg::{unit_vector, vec_scale, Matrix, Vector};
use crate::scalar::Scalar;
use crate::shear::shear;

use super::almost_abelian::{aa_build_data, AlmostAbelian};
use super::{hyp, kernel_of, GeomError};

/// `d(σ^{n-1}) = 0` computed directly, and via `f(JX) = tr(f) JX` when almost Abelian.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiKahlerReport {
    pub d_test: bool,
    pub f_test: Option<bool>,
}

impl SemiKahlerReport {
    pub fn agrees(&self) -> bool {
        self.f_test.is_none_or(|f| f == self.d_test)
    }
}

/// `J e_j = Σ_i σ(e_i, e_j) e_i`; requires the standard metric to be compatible.
fn complex_structure(sigma: &KForm) -> Result<Matrix, GeomError> {
    let n = sigma.dim();
    let j = Matrix::from_fn(n, n, |i, k| sigma.coeff(&[i, k]));
    if j.mul(&j) != Matrix::identity(n).neg() {
        return Err(GeomError::NotAdapted("σ is not standard for the identity metric".into()));
    }
    Ok(j)
}

/// Almost semi-Kähler test for `σ` on `g`; `x` selects the almost Abelian splitting `X = e_x`.
pub fn semi_kahler_check(g: &LieAlgebra, sigma: &KForm, x: Option<usize>) -> Result<SemiKahlerReport, GeomError> {
    let n = g.dim();
    if n % 2 != 0 || sigma.dim() != n || sigma.degree() != 2 {
        return Err(GeomError::Shape("need a 2-form on an even-dimensional algebra".into()));
    }
    let m = n / 2;
    hyp(!sigma.power(m).is_zero(), "σ is non-degenerate")?;
    let d_test = ce_differential(g, &sigma.power(m - 1)).is_zero();
    let f_test = match x {
        None => None,
        Some(x) => {
            let aa = AlmostAbelian::new(g, x)?;
            let j = complex_structure(sigma)?;
            let jx = j.mul_vec(&unit_vector(n, x));
            Some(aa.f().mul_vec(&jx) == vec_scale(&jx, &aa.f().trace()))
        }
    };
    Ok(SemiKahlerReport { d_test, f_test })
}

/// The three conditions for `ω₀ = ω̃⊗JX`, `a = ker ω₀`, to keep the structure almost semi-Kähler.
#[derive(Clone, Debug, PartialEq)]
pub struct SkShearReport {
    pub lambda: Scalar,
    /// `f.ω̃ = λ ω̃`.
    pub eigen: bool,
    /// `ν(JX) = -(λ + tr f) JX`.
    pub nu_on_jx: bool,
    /// `ω̃ - ν.σ₁` has no trace part on `U = span(X, JX)^⊥`.
    pub type_condition: bool,
    pub conditions_hold: bool,
    /// `d_h(σ^{n-1}) = 0` on the shear; `None` if the data is not valid shear data.
    pub shear_semi_kahler: Option<bool>,
}

impl SkShearReport {
    pub fn agrees(&self) -> bool {
        self.conditions_hold == self.shear_semi_kahler.unwrap_or(false)
    }
}

/// `λ` from `f.ω̃ = λω̃` if `ω̃` is an eigenform.
fn eigenvalue(w: &KForm, f: &Matrix) -> Option<Scalar> {
    let fw = w.endo_action(f);
    let (m, c) = w.masks().find(|(_, c)| c.is_constant())?;
    let lam = fw.coeff_mask(m).checked_div(c).ok()?;
    (fw == w.scale(&lam)).then_some(lam)
}

/// Evaluates the semi-Kähler shear conditions. With `lambda = None` the
/// eigenvalue is derived from `f.ω̃`.
pub fn semi_kahler_shear_conditions(
    aa: &AlmostAbelian,
    sigma: &KForm,
    omega_t: &KForm,
    lambda: Option<Scalar>,
    nu: &Matrix,
) -> Result<SkShearReport, GeomError> {
    let n = aa.dim();
    let x = aa.x();
    let j = complex_structure(sigma)?;
    let jx = j.mul_vec(&unit_vector(n, x));
    let jx_idx = (0..n)
        .find(|&i| jx == unit_vector(n, i) || jx == vec_scale(&unit_vector(n, i), &Scalar::int(-1)))
        .ok_or_else(|| GeomError::NotAdapted("JX must be a signed basis vector".into()))?;
    hyp(omega_t.without_index(x) == *omega_t, "omega is a form on u")?;
    let comps: Vec<KForm> = jx.iter().map(|c| omega_t.scale(c)).collect();
    let a = kernel_of(&comps, &aa.u())?;
    hyp(a.contains(&jx), "JX ∈ ker omega0")?;
    let f = aa.f();
    let lambda = match lambda {
        Some(l) => l,
        None => eigenvalue(omega_t, f).unwrap_or_else(Scalar::zero),
    };
    let eigen = omega_t.endo_action(f) == omega_t.scale(&lambda);
    let tr = f.trace();
    let nu_on_jx = nu.mul_vec(&jx) == vec_scale(&jx, &-&(&lambda + &tr));
    let jx_flat: KForm = {
        let mut k = KForm::zero(n, 1);
        for (i, c) in jx.iter().enumerate() {
            k.add_term(&[i], c.clone());
        }
        k
    };
    let sigma1 = sigma - &jx_flat.wedge(&aa.alpha());
    let keep: Vec<usize> = (0..n).filter(|&i| i != x && i != jx_idx).collect();
    let drop = |k: &KForm| k.without_index(x).without_index(jx_idx).restrict_to(&keep);
    let beta = drop(&(omega_t - &sigma1.endo_action(nu)))?;
    let j_u = j.select(&keep, &keep);
    let type_condition = type_split(&beta, &j_u, &drop(&sigma1)?)?.trace_coeff.is_zero();
    let conditions_hold = eigen && nu_on_jx && type_condition;

    let basis: Vec<Vector> = (0..n).map(|i| unit_vector(n, i)).collect();
    let omega0 = VForm::new(ValueSpace::embedded("g", basis), comps)?;
    let m = n / 2;
    let shear_semi_kahler = match aa_build_data(aa, &a, &omega0, nu) {
        Ok(data) => match shear(data.data()) {
            Ok(r) => Some(ce_differential(&r.shear, &sigma.power(m - 1)).is_zero()),
            Err(_) => None,
        },
        Err(GeomError::Hypothesis(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(SkShearReport { lambda, eigen, nu_on_jx, type_condition, conditions_hold, shear_semi_kahler })
}
