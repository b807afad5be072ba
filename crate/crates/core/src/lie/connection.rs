use crate::exterior::{KForm, VForm};
use crate::linalg::Matrix;
use crate::scalar::{Assignment, Instantiate, Scalar};

use super::algebra::{ce_differential_with, LieAlgebra};
use super::LieError;

/// Endomorphism-valued 1-form: `mats[i]` is the value on `e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    values: usize,
    mats: Vec<Matrix>,
}

impl Connection {
    pub fn zero(dim: usize, values: usize) -> Self {
        Connection { values, mats: vec![Matrix::zeros(values, values); dim] }
    }

    pub fn new(values: usize, mats: Vec<Matrix>) -> Result<Self, LieError> {
        if mats.iter().any(|m| m.rows() != values || m.cols() != values) {
            return Err(LieError::DimensionMismatch("connection matrices must be square of the value dimension".into()));
        }
        Ok(Connection { values, mats })
    }

    /// `α ⊗ M` for a 1-form `α`.
    pub fn from_one_form(alpha: &KForm, m: &Matrix) -> Self {
        assert_eq!(alpha.degree(), 1, "expected a 1-form");
        let mats = (0..alpha.dim()).map(|i| m.scale(&alpha.coeff(&[i]))).collect();
        Connection { values: m.rows(), mats }
    }

    pub fn dim(&self) -> usize {
        self.mats.len()
    }

    pub fn values(&self) -> usize {
        self.values
    }

    pub fn at(&self, i: usize) -> &Matrix {
        &self.mats[i]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn eval(&self, x: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(self.values, self.values);
        for (xi, m) in x.iter().zip(&self.mats) {
            if !xi.is_zero() {
                out = out.add(&m.scale(xi));
            }
        }
        out
    }

    pub fn add(&self, o: &Connection) -> Connection {
        Connection { values: self.values, mats: self.mats.iter().zip(&o.mats).map(|(a, b)| a.add(b)).collect() }
    }

    /// Scalar 1-form `X ↦ γ(X)_{ab}`.
    pub fn entry_form(&self, a: usize, b: usize) -> KForm {
        let mut f = KForm::zero(self.dim(), 1);
        for (i, m) in self.mats.iter().enumerate() {
            f.add_term(&[i], m.get(a, b).clone());
        }
        f
    }

    /// Conjugates every value: `X ↦ p γ(X) q`.
    pub fn sandwich(&self, p: &Matrix, q: &Matrix) -> Connection {
        Connection { values: p.rows(), mats: self.mats.iter().map(|m| p.mul(m).mul(q)).collect() }
    }

    /// First basis pair with `γ([e_i,e_j]) ≠ [γ(e_i), γ(e_j)]`, if any.
    pub fn flatness_defect(&self, g: &LieAlgebra) -> Option<(usize, usize)> {
        let n = g.dim();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.eval(&g.bracket_basis(i, j));
                let rhs = self.mats[i].commutator(&self.mats[j]);
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_flat(&self, g: &LieAlgebra) -> bool {
        self.flatness_defect(g).is_none()
    }
}

impl Instantiate for Connection {
    fn instantiate(&self, a: &Assignment) -> Self {
        Connection { values: self.values, mats: self.mats.iter().map(|m| m.instantiate(a)).collect() }
    }
}

/// `d∇α = dα + η ∧ α` with `(η∧α)^a = Σ_b η^a_b ∧ α^b`.
pub fn d_nabla(g: &LieAlgebra, eta: &Connection, alpha: &VForm) -> Result<VForm, LieError> {
    if eta.values() != alpha.value_dim() {
        return Err(LieError::DimensionMismatch(format!(
            "connection acts on dimension {} but the form has {} components",
            eta.values(),
            alpha.value_dim()
        )));
    }
    if eta.dim() != g.dim() || alpha.dim().is_some_and(|d| d != g.dim()) {
        return Err(LieError::DimensionMismatch("connection or form lives on a different algebra".into()));
    }
    let des = g.differentials();
    let m = alpha.value_dim();
    let comps = (0..m)
        .map(|a| {
            let mut c = ce_differential_with(&des, alpha.comp(a));
            for b in 0..m {
                let e = eta.entry_form(a, b);
                if !e.is_zero() {
                    c = &c + &e.wedge(alpha.comp(b));
                }
            }
            c
        })
        .collect();
    Ok(VForm::new(alpha.values().clone(), comps)?)
}

/// Alias with the short operator name.
#[allow(non_snake_case)]
pub fn dN(g: &LieAlgebra, eta: &Connection, alpha: &VForm) -> Result<VForm, LieError> {
    d_nabla(g, eta, alpha)
}
