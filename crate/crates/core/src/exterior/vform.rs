use crate::linalg::{Matrix, Vector};
use crate::scalar::{Assignment, Instantiate};

use super::form::KForm;
use super::ExteriorError;

/// Where the values of a [`VForm`] live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueSpace {
    Abstract { name: String, dim: usize },
    /// Spanned by the given ambient vectors (coordinates in the form's own space).
    Embedded { name: String, basis: Vec<Vector> },
}

impl ValueSpace {
    pub fn abstract_space(name: &str, dim: usize) -> Self {
        ValueSpace::Abstract { name: name.to_string(), dim }
    }

    pub fn embedded(name: &str, basis: Vec<Vector>) -> Self {
        ValueSpace::Embedded { name: name.to_string(), basis }
    }

    pub fn dim(&self) -> usize {
        match self {
            ValueSpace::Abstract { dim, .. } => *dim,
            ValueSpace::Embedded { basis, .. } => basis.len(),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            ValueSpace::Abstract { name, .. } | ValueSpace::Embedded { name, .. } => name,
        }
    }
}

/// Vector-valued k-form: one scalar component per basis vector of the value space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VForm {
    values: ValueSpace,
    comps: Vec<KForm>,
}

impl VForm {
    pub fn new(values: ValueSpace, comps: Vec<KForm>) -> Result<Self, ExteriorError> {
        if comps.len() != values.dim() {
            return Err(ExteriorError::ValueDimension(values.dim(), comps.len()));
        }
        if let Some(first) = comps.first() {
            for c in &comps {
                if c.dim() != first.dim() {
                    return Err(ExteriorError::DimensionMismatch(first.dim(), c.dim()));
                }
                if c.degree() != first.degree() {
                    return Err(ExteriorError::DegreeMismatch(first.degree(), c.degree()));
                }
            }
        }
        if let ValueSpace::Embedded { basis, .. } = &values {
            if let (Some(v), Some(c)) = (basis.first(), comps.first()) {
                if v.len() != c.dim() {
                    return Err(ExteriorError::DimensionMismatch(c.dim(), v.len()));
                }
            }
        }
        Ok(VForm { values, comps })
    }

    pub fn zero(values: ValueSpace, dim: usize, degree: usize) -> Self {
        let comps = vec![KForm::zero(dim, degree); values.dim()];
        VForm { values, comps }
    }

    /// `ρ ⊗ w_a` for the a-th value basis vector.
    pub fn single(values: ValueSpace, form: KForm, a: usize) -> Self {
        let mut out = VForm::zero(values, form.dim(), form.degree());
        out.comps[a] = form;
        out
    }

    pub fn values(&self) -> &ValueSpace {
        &self.values
    }

    pub fn value_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[KForm] {
        &self.comps
    }

    pub fn comp(&self, a: usize) -> &KForm {
        &self.comps[a]
    }

    pub fn dim(&self) -> Option<usize> {
        self.comps.first().map(KForm::dim)
    }

    pub fn degree(&self) -> Option<usize> {
        self.comps.first().map(KForm::degree)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(KForm::is_zero)
    }

    pub fn with_values(&self, values: ValueSpace) -> Result<Self, ExteriorError> {
        VForm::new(values, self.comps.clone())
    }

    /// Value coordinates of the form on the given vectors.
    pub fn evaluate(&self, vectors: &[Vector]) -> Vector {
        self.comps.iter().map(|c| c.evaluate(vectors)).collect()
    }

    pub fn add(&self, o: &VForm) -> Result<VForm, ExteriorError> {
        if self.comps.len() != o.comps.len() {
            return Err(ExteriorError::ValueDimension(self.comps.len(), o.comps.len()));
        }
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect();
        VForm::new(self.values.clone(), comps)
    }

    pub fn sub(&self, o: &VForm) -> Result<VForm, ExteriorError> {
        self.add(&o.map_forms(|f| -f))
    }

    pub fn map_forms(&self, f: impl Fn(&KForm) -> KForm) -> VForm {
        VForm { values: self.values.clone(), comps: self.comps.iter().map(f).collect() }
    }

    /// `β ∧ ω` component-wise.
    pub fn wedge_left(&self, beta: &KForm) -> VForm {
        self.map_forms(|c| beta.wedge(c))
    }

    /// `ω ∧ β` component-wise.
    pub fn wedge_right(&self, beta: &KForm) -> VForm {
        self.map_forms(|c| c.wedge(beta))
    }

    /// Slot-wise endomorphism action on the form part.
    pub fn endo_action(&self, f: &Matrix) -> VForm {
        self.map_forms(|c| c.endo_action(f))
    }

    /// Applies a linear map to the values: component `a` becomes `Σ_b m_ab ω^b`.
    pub fn map_values(&self, m: &Matrix, values: ValueSpace) -> Result<VForm, ExteriorError> {
        if m.cols() != self.comps.len() || m.rows() != values.dim() {
            return Err(ExteriorError::ValueDimension(values.dim(), m.rows()));
        }
        let dim = self.dim().unwrap_or(0);
        let deg = self.degree().unwrap_or(0);
        let comps = (0..m.rows())
            .map(|a| {
                let mut acc = KForm::zero(dim, deg);
                for b in 0..m.cols() {
                    let s = m.get(a, b);
                    if !s.is_zero() {
                        acc = &acc + &self.comps[b].scale(s);
                    }
                }
                acc
            })
            .collect();
        VForm::new(values, comps)
    }

    /// Components in ambient coordinates, for embedded value spaces.
    pub fn ambient_components(&self) -> Result<Vec<KForm>, ExteriorError> {
        let ValueSpace::Embedded { basis, .. } = &self.values else {
            return Err(ExteriorError::NotEmbedded);
        };
        let dim = self.dim().unwrap_or(0);
        let deg = self.degree().unwrap_or(0);
        let n = basis.first().map(Vec::len).unwrap_or(dim);
        let mut out = vec![KForm::zero(dim, deg); n];
        for (a, w) in basis.iter().enumerate() {
            for (i, wi) in w.iter().enumerate() {
                if !wi.is_zero() {
                    out[i] = &out[i] + &self.comps[a].scale(wi);
                }
            }
        }
        Ok(out)
    }

    /// `κ(ρ ⊗ A) = A ⌟ ρ`, extended linearly.
    pub fn kappa(&self) -> Result<KForm, ExteriorError> {
        let ValueSpace::Embedded { basis, .. } = &self.values else {
            return Err(ExteriorError::NotEmbedded);
        };
        let dim = self.dim().ok_or(ExteriorError::NotEmbedded)?;
        let deg = self.degree().unwrap_or(0);
        let mut out = KForm::zero(dim, deg.saturating_sub(1));
        for (a, w) in basis.iter().enumerate() {
            out = &out + &self.comps[a].interior(w);
        }
        Ok(out)
    }
}

impl Instantiate for ValueSpace {
    fn instantiate(&self, a: &Assignment) -> Self {
        match self {
            ValueSpace::Abstract { .. } => self.clone(),
            ValueSpace::Embedded { name, basis } => ValueSpace::Embedded {
                name: name.clone(),
                basis: basis.iter().map(|v| v.iter().map(|s| s.instantiate(a)).collect()).collect(),
            },
        }
    }
}

impl Instantiate for VForm {
    fn instantiate(&self, a: &Assignment) -> Self {
        VForm { values: self.values.instantiate(a), comps: self.comps.iter().map(|c| c.instantiate(a)).collect() }
    }
}

/// `κ(β ∧ ω)` for a scalar form `β` and an embedded `ω`.
pub fn kappa_wedge(beta: &KForm, omega: &VForm) -> Result<KForm, ExteriorError> {
    omega.wedge_left(beta).kappa()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector as unit;

    #[test]
    fn kappa_examples() {
        let n = 7;
        let a1 = ValueSpace::embedded("a", vec![unit(n, 0)]);
        let w = VForm::single(a1.clone(), KForm::basis(n, &[0, 1]), 0);
        assert_eq!(w.kappa().unwrap(), KForm::basis(n, &[1]));
        let a3 = ValueSpace::embedded("a", vec![unit(n, 2)]);
        assert!(VForm::single(a3, KForm::basis(n, &[0, 1]), 0).kappa().unwrap().is_zero());
        let w0 = &KForm::basis(n, &[2, 5]) - &KForm::basis(n, &[1, 4]);
        assert!(VForm::single(a1, w0, 0).kappa().unwrap().is_zero());
    }

    #[test]
    fn abstract_values_have_no_kappa() {
        let v = VForm::zero(ValueSpace::abstract_space("aP", 2), 3, 2);
        assert_eq!(v.kappa(), Err(ExteriorError::NotEmbedded));
    }

    #[test]
    fn mismatched_components_rejected() {
        let r = VForm::new(
            ValueSpace::abstract_space("v", 2),
            vec![KForm::basis(3, &[0]), KForm::basis(3, &[0, 1])],
        );
        assert_eq!(r, Err(ExteriorError::DegreeMismatch(1, 2)));
    }
}
