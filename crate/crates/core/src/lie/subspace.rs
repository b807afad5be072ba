use crate::linalg::{dot, is_zero_vector, row_reduce, unit_vector, vec_scale, vec_sub, LinalgError, Matrix, Vector};
use crate::scalar::{Assignment, Instantiate, Scalar};

/// Subspace of `K^n` kept as a reduced echelon basis with constant unit pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vector]) -> Result<Self, LinalgError> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(LinalgError::DimensionMismatch("spanning vector length".into()));
        }
        let e = row_reduce(vectors.to_vec(), ambient)?;
        Ok(Subspace { ambient, basis: e.rows, pivots: e.pivots })
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::coordinate(ambient, &(0..ambient).collect::<Vec<_>>())
    }

    /// `span(e_i : i ∈ idx)` (zero-based).
    pub fn coordinate(ambient: usize, idx: &[usize]) -> Self {
        let mut idx = idx.to_vec();
        idx.sort_unstable();
        idx.dedup();
        Subspace { ambient, basis: idx.iter().map(|&i| unit_vector(ambient, i)).collect(), pivots: idx }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `n × k` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    /// Coordinates in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        let c: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut r = v.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            if !ci.is_zero() {
                r = vec_sub(&r, &vec_scale(b, ci));
            }
        }
        is_zero_vector(&r).then_some(c)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> bool {
        self.basis.iter().all(|b| o.contains(b))
    }

    pub fn same_as(&self, o: &Subspace) -> bool {
        self.dim() == o.dim() && self.is_subspace_of(o)
    }

    /// Standard basis vectors at the non-pivot positions; a complement of `self`.
    pub fn pivot_complement(&self) -> Subspace {
        let free: Vec<usize> = (0..self.ambient).filter(|i| !self.pivots.contains(i)).collect();
        Subspace::coordinate(self.ambient, &free)
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace, LinalgError> {
        let mut v = self.basis.clone();
        v.extend(o.basis.iter().cloned());
        Subspace::span(self.ambient, &v)
    }

    pub fn intersection(&self, o: &Subspace) -> Result<Subspace, LinalgError> {
        if self.is_zero() || o.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let a = self.basis_matrix();
        let b = o.basis_matrix().neg();
        let kernel = a.hstack(&b).nullspace()?;
        let k = self.dim();
        let vecs: Vec<Vector> = kernel.iter().map(|x| a.mul_vec(&x[..k])).collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Orthogonal complement for the standard inner product.
    pub fn orthogonal_complement(&self) -> Result<Subspace, LinalgError> {
        if self.is_zero() {
            return Ok(Subspace::full(self.ambient));
        }
        let m = Matrix::from_rows(&self.basis);
        Subspace::span(self.ambient, &m.nullspace()?)
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        let vecs: Vec<Vector> = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Subspace::span(m.rows(), &vecs)
    }

    pub fn is_invariant(&self, m: &Matrix) -> bool {
        self.basis.iter().all(|b| self.contains(&m.mul_vec(b)))
    }

    /// Orthogonal projection onto `self` for the standard inner product.
    pub fn orthogonal_projection(&self, v: &[Scalar]) -> Result<Vector, LinalgError> {
        let k = self.dim();
        if k == 0 {
            return Ok(vec![Scalar::zero(); self.ambient]);
        }
        let gram = Matrix::from_fn(k, k, |i, j| dot(&self.basis[i], &self.basis[j]));
        let rhs: Vector = self.basis.iter().map(|b| dot(b, v)).collect();
        let c = gram.inverse()?.mul_vec(&rhs);
        Ok(self.basis_matrix().mul_vec(&c))
    }
}

impl Instantiate for Subspace {
    /// Re-reduces the instantiated basis; panics only if pivots became undecidable.
    fn instantiate(&self, a: &Assignment) -> Self {
        let vecs: Vec<Vector> = self.basis.iter().map(|v| v.instantiate(a)).collect();
        Subspace::span(self.ambient, &vecs).expect("instantiated subspace reduces")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn echelon_and_membership() {
        let s = Subspace::span(3, &[v(&[1, 1, 0]), v(&[2, 2, 0]), v(&[0, 1, 1])]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&v(&[1, 2, 1])));
        assert!(!s.contains(&v(&[0, 0, 1])));
        assert_eq!(s.coordinates(&v(&[1, 2, 1])).unwrap().len(), 2);
    }

    #[test]
    fn complement_and_intersection() {
        let s = Subspace::span(3, &[v(&[1, 1, 0])]).unwrap();
        let c = s.pivot_complement();
        assert_eq!(c.dim(), 2);
        assert_eq!(s.sum(&c).unwrap().dim(), 3);
        let t = Subspace::coordinate(3, &[0, 1]);
        assert!(s.intersection(&t).unwrap().same_as(&s));
        assert_eq!(s.orthogonal_complement().unwrap().dim(), 2);
    }

    #[test]
    fn parametric_membership() {
        let a = Scalar::param("a");
        let s = Subspace::span(2, &[vec![a.clone(), Scalar::one()]]).unwrap();
        assert!(s.contains(&[&a * &Scalar::int(3), Scalar::int(3)]));
        assert!(!s.contains(&[Scalar::one(), Scalar::one()]));
    }
}
