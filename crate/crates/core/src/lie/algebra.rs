use std::collections::BTreeMap;

use crate::exterior::{indices_of, sort_with_sign, Form, KForm};
use crate::linalg::{is_zero_vector, vec_add, vec_scale, vec_sub, zero_vector, Matrix, Vector};
use crate::scalar::{Assignment, Coeff, Instantiate, Scalar};

use super::LieError;

/// Lie algebra given by structure constants on `e_1, ..., e_n`.
///
/// Only brackets `[e_i, e_j]` with `i < j` are stored. Jacobi is not enforced
/// at construction; use [`jacobi_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vector>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

impl LieAlgebra {
    pub fn abelian(n: usize) -> Self {
        LieAlgebra { dim: n, labels: default_labels(n), brackets: BTreeMap::new() }
    }

    /// `[e_i, e_j] = v` entries (zero-based); `i > j` entries are antisymmetrised.
    pub fn from_brackets(n: usize, entries: impl IntoIterator<Item = ((usize, usize), Vector)>) -> Result<Self, LieError> {
        let mut g = LieAlgebra::abelian(n);
        for ((i, j), v) in entries {
            if i >= n || j >= n || v.len() != n {
                return Err(LieError::InvalidBracket(format!("[e{}, e{}] out of range", i + 1, j + 1)));
            }
            if i == j {
                if !is_zero_vector(&v) {
                    return Err(LieError::InvalidBracket(format!("[e{0}, e{0}] must vanish", i + 1)));
                }
                continue;
            }
            let (key, v) = if i < j { ((i, j), v) } else { ((j, i), vec_scale(&v, &Scalar::int(-1))) };
            let cur = g.brackets.remove(&key).unwrap_or_else(|| zero_vector(n));
            let sum = vec_add(&cur, &v);
            if !is_zero_vector(&sum) {
                g.brackets.insert(key, sum);
            }
        }
        Ok(g)
    }

    /// Reads `de^k` for each `k` and sets `[e_i,e_j] = -Σ_k c^k_ij e_k` where `de^k = Σ c^k_ij e^{ij}`.
    pub fn from_differentials(des: &[KForm]) -> Result<Self, LieError> {
        let n = des.len();
        let mut entries: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for (k, de) in des.iter().enumerate() {
            if de.dim() != n || (de.degree() != 2 && !de.is_zero()) {
                return Err(LieError::InvalidBracket(format!("de^{} is not a 2-form on dimension {n}", k + 1)));
            }
            for (mask, c) in de.masks() {
                let idx = indices_of(mask);
                let v = entries.entry((idx[0], idx[1])).or_insert_with(|| zero_vector(n));
                v[k] -= c;
            }
        }
        LieAlgebra::from_brackets(n, entries)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim, "label count");
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Nonzero `[e_i, e_j]`, `i < j`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (&(usize, usize), &Vector)> {
        self.brackets.iter()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => zero_vector(self.dim),
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_else(|| zero_vector(self.dim)),
            Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| vec_scale(v, &Scalar::int(-1)))
                .unwrap_or_else(|| zero_vector(self.dim)),
        }
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.bracket_basis(i, j)[k].clone()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        assert!(x.len() == self.dim && y.len() == self.dim, "bracket of vectors of wrong size");
        let mut out = zero_vector(self.dim);
        for ((i, j), v) in &self.brackets {
            let c = &(&x[*i] * &y[*j]) - &(&x[*j] * &y[*i]);
            if c.is_zero() {
                continue;
            }
            for (o, vk) in out.iter_mut().zip(v) {
                if !vk.is_zero() {
                    *o += &(&c * vk);
                }
            }
        }
        out
    }

    /// Matrix of `ad(x)`: column `j` is `[x, e_j]`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.bracket(x, &crate::linalg::unit_vector(self.dim, j))).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.bracket_basis(i, j)).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// `de^k = -Σ_{i<j} c^k_ij e^{ij}`.
    pub fn differential_basis(&self, k: usize) -> KForm {
        let mut f = KForm::zero(self.dim, 2);
        for ((i, j), v) in &self.brackets {
            if !v[k].is_zero() {
                f.add_term(&[*i, *j], -&v[k]);
            }
        }
        f
    }

    pub fn differentials(&self) -> Vec<KForm> {
        (0..self.dim).map(|k| self.differential_basis(k)).collect()
    }

    /// Structure constants agree (labels ignored).
    pub fn same_structure(&self, o: &LieAlgebra) -> bool {
        self.dim == o.dim && self.brackets == o.brackets
    }

    /// Change of basis: returns the algebra in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<LieAlgebra, LieError> {
        let inv = p.inverse()?;
        let cols = p.columns();
        let mut entries = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = inv.mul_vec(&self.bracket(&cols[i], &cols[j]));
                if !is_zero_vector(&v) {
                    entries.push(((i, j), v));
                }
            }
        }
        LieAlgebra::from_brackets(self.dim, entries)
    }

    /// Difference of structure constants, for diagnostics.
    pub fn structure_difference(&self, o: &LieAlgebra) -> Option<((usize, usize), Vector)> {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let d = vec_sub(&self.bracket_basis(i, j), &o.bracket_basis(i, j));
                if !is_zero_vector(&d) {
                    return Some(((i, j), d));
                }
            }
        }
        None
    }

    pub fn params(&self) -> std::collections::BTreeSet<String> {
        self.brackets.values().flat_map(|v| v.iter().flat_map(Scalar::params)).collect()
    }
}

impl Instantiate for LieAlgebra {
    fn instantiate(&self, a: &Assignment) -> Self {
        let entries = self.brackets.iter().map(|(k, v)| (*k, v.instantiate(a)));
        LieAlgebra::from_brackets(self.dim, entries)
            .expect("instantiation keeps indices valid")
            .with_labels(self.labels.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub passed: bool,
    /// First failing triple (zero-based) with the cyclic sum.
    pub violation: Option<((usize, usize, usize), Vector)>,
}

/// Checks `Σ_cyc [[e_i,e_j],e_k] = 0` for all `i < j < k`.
pub fn jacobi_check(g: &LieAlgebra) -> JacobiReport {
    let n = g.dim();
    for i in 0..n {
        for j in i + 1..n {
            let eij = g.bracket_basis(i, j);
            for k in j + 1..n {
                let ek = crate::linalg::unit_vector(n, k);
                let ei = crate::linalg::unit_vector(n, i);
                let ej = crate::linalg::unit_vector(n, j);
                let s = vec_add(
                    &vec_add(&g.bracket(&eij, &ek), &g.bracket(&g.bracket_basis(j, k), &ei)),
                    &g.bracket(&g.bracket_basis(k, i), &ej),
                );
                if !is_zero_vector(&s) {
                    return JacobiReport { passed: false, violation: Some(((i, j, k), s)) };
                }
            }
        }
    }
    JacobiReport { passed: true, violation: None }
}

/// Chevalley-Eilenberg differential with `dα(X,Y) = -α([X,Y])` on 1-forms.
pub fn ce_differential(g: &LieAlgebra, alpha: &KForm) -> KForm {
    ce_differential_with(&g.differentials(), alpha)
}

/// [`ce_differential`] with precomputed `de^k`.
pub fn ce_differential_with<C: Coeff>(des: &[Form<C>], alpha: &Form<C>) -> Form<C> {
    let n = alpha.dim();
    assert_eq!(des.len(), n, "differential table size");
    let mut out = Form::zero(n, alpha.degree() + 1);
    if alpha.degree() >= n {
        return out;
    }
    for (mask, c) in alpha.masks() {
        let idx = indices_of(mask);
        for (s, &is) in idx.iter().enumerate() {
            let rest = mask & !(1 << is);
            for (ab, c2) in des[is].masks() {
                if ab & rest != 0 {
                    continue;
                }
                let pair = indices_of(ab);
                let mut seq = Vec::with_capacity(idx.len() + 1);
                seq.extend_from_slice(&idx[..s]);
                seq.extend_from_slice(&pair);
                seq.extend_from_slice(&idx[s + 1..]);
                let (m2, sign) = sort_with_sign(&seq).expect("disjoint indices");
                let mut v = c.times(c2);
                if (sign < 0) != (s % 2 == 1) {
                    v = v.negated();
                }
                out.add_to_mask(m2, v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn heisenberg() -> LieAlgebra {
        // (0,0,12): de^3 = e^{12}, so [e1,e2] = -e3
        LieAlgebra::from_differentials(&[KForm::zero(3, 2), KForm::zero(3, 2), KForm::basis(3, &[0, 1])]).unwrap()
    }

    #[test]
    fn sign_convention() {
        let h = heisenberg();
        assert_eq!(h.bracket_basis(0, 1), vec![Scalar::zero(), Scalar::zero(), Scalar::int(-1)]);
        let x = vec![Scalar::int(1), Scalar::int(0), Scalar::int(0)];
        let y = vec![Scalar::int(0), Scalar::int(1), Scalar::int(0)];
        // dα(X,Y) = -α([X,Y]) for α = e^3
        let d = ce_differential(&h, &KForm::basis(3, &[2]));
        assert_eq!(d.evaluate(&[x.clone(), y.clone()]), -&KForm::basis(3, &[2]).evaluate(&[h.bracket(&x, &y)]));
        assert_eq!(d, KForm::basis(3, &[0, 1]));
        assert!(ce_differential(&h, &d).is_zero());
    }

    #[test]
    fn jacobi_failure_reports_triple() {
        let mut v = zero_vector(3);
        v[0] = Scalar::one();
        // [e1,e2] = e1, [e2,e3] = e2, [e1,e3] = e3 is not a Lie algebra
        let mut w = zero_vector(3);
        w[1] = Scalar::one();
        let mut u = zero_vector(3);
        u[2] = Scalar::one();
        let g = LieAlgebra::from_brackets(3, vec![((0, 1), v), ((1, 2), w), ((0, 2), u)]).unwrap();
        let r = jacobi_check(&g);
        assert!(!r.passed);
        assert_eq!(r.violation.unwrap().0, (0, 1, 2));
    }

    #[test]
    fn differentials_roundtrip() {
        let h = heisenberg();
        let back = LieAlgebra::from_differentials(&h.differentials()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn change_basis_identity() {
        let h = heisenberg();
        assert_eq!(h.change_basis(&Matrix::identity(3)).unwrap().nonzero_brackets().count(), 1);
    }
}
