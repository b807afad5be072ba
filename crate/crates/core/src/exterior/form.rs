use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::linalg::Matrix;
use crate::scalar::{Assignment, Coeff, Instantiate, Scalar};

use super::ExteriorError;

/// Strictly increasing index tuple packed as a bit set (bit `i` = index `i`).
pub type Mask = u32;

pub const MAX_DIM: usize = 32;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn indices_of(mask: Mask) -> Vec<usize> {
    (0..MAX_DIM).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sorts `idx`, returning the mask and permutation sign, or `None` on a repeat.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Mask, i64)> {
    let mut mask = 0;
    let mut sign = 1;
    for (k, &i) in idx.iter().enumerate() {
        if mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
        sign *= if idx[..k].iter().filter(|&&j| j > i).count() % 2 == 0 { 1 } else { -1 };
    }
    Some((mask, sign))
}

/// Sign of `e^A ^ e^B` relative to `e^{A|B}`; disjoint masks only.
pub fn merge_sign(a: Mask, b: Mask) -> i64 {
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Alternating k-form on an n-dimensional space, stored on increasing tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form<C: Coeff = Scalar> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Mask, C>,
}

pub type KForm = Form<Scalar>;
pub type RealForm = Form<f64>;

impl<C: Coeff> Form<C> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension above {MAX_DIM}");
        Form { dim, degree, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: C) -> Self {
        let mut f = Form::zero(dim, 0);
        f.add_to_mask(0, c);
        f
    }

    /// `e^{i1} ^ ... ^ e^{ik}` for zero-based indices in any order.
    pub fn basis(dim: usize, idx: &[usize]) -> Self {
        let mut f = Form::zero(dim, idx.len());
        f.add_term(idx, C::one());
        f
    }

    pub fn from_terms<'a>(dim: usize, degree: usize, terms: impl IntoIterator<Item = (&'a [usize], C)>) -> Self {
        let mut f = Form::zero(dim, degree);
        for (idx, c) in terms {
            f.add_term(idx, c);
        }
        f
    }

    /// Adds `c e^{idx}`, sorting the indices with sign.
    pub fn add_term(&mut self, idx: &[usize], c: C) {
        assert_eq!(idx.len(), self.degree, "term degree mismatch");
        assert!(idx.iter().all(|&i| i < self.dim), "index out of range");
        if let Some((mask, sign)) = sort_with_sign(idx) {
            let c = if sign < 0 { c.negated() } else { c };
            self.add_to_mask(mask, c);
        }
    }

    pub fn add_to_mask(&mut self, mask: Mask, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, idx: &[usize]) -> C {
        match sort_with_sign(idx) {
            Some((mask, sign)) => {
                let c = self.coeff_mask(mask);
                if sign < 0 {
                    c.negated()
                } else {
                    c
                }
            }
            None => C::zero(),
        }
    }

    pub fn coeff_mask(&self, mask: Mask) -> C {
        self.terms.get(&mask).cloned().unwrap_or_else(C::zero)
    }

    pub fn masks(&self) -> impl Iterator<Item = (Mask, &C)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Terms as (ascending zero-based indices, coefficient), lexicographically sorted.
    pub fn terms(&self) -> Vec<(Vec<usize>, &C)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (indices_of(*m), c)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.terms {
            out.add_to_mask(*m, c.times(s));
        }
        out
    }

    pub fn map<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.terms {
            out.add_to_mask(*m, f(c));
        }
        out
    }

    pub fn try_wedge(&self, o: &Self) -> Result<Self, ExteriorError> {
        if self.dim != o.dim {
            return Err(ExteriorError::DimensionMismatch(self.dim, o.dim));
        }
        let mut out = Form::zero(self.dim, self.degree + o.degree);
        if self.degree + o.degree > self.dim {
            return Ok(out);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca.times(cb);
                let c = if merge_sign(*ma, *mb) < 0 { c.negated() } else { c };
                out.add_to_mask(ma | mb, c);
            }
        }
        Ok(out)
    }

    /// # Panics
    /// On ambient-dimension mismatch; see [`Form::try_wedge`].
    pub fn wedge(&self, o: &Self) -> Self {
        self.try_wedge(o).expect("wedge of forms on different spaces")
    }

    /// `v ⌟ self`; a 0-form contracts to zero.
    pub fn interior(&self, v: &[C]) -> Self {
        assert_eq!(v.len(), self.dim, "vector dimension mismatch");
        if self.degree == 0 {
            return Form::zero(self.dim, 0);
        }
        let mut out = Form::zero(self.dim, self.degree - 1);
        for (m, c) in &self.terms {
            for (pos, i) in indices_of(*m).into_iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let t = c.times(&v[i]);
                let t = if pos % 2 == 1 { t.negated() } else { t };
                out.add_to_mask(m & !(1 << i), t);
            }
        }
        out
    }

    /// Contraction with the basis vector `e_i`.
    pub fn interior_basis(&self, i: usize) -> Self {
        let mut v = vec![C::zero(); self.dim];
        v[i] = C::one();
        self.interior(&v)
    }

    /// Value on k vectors (determinant convention).
    pub fn evaluate(&self, vectors: &[Vec<C>]) -> C {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let mut f = self.clone();
        for v in vectors {
            f = f.interior(v);
        }
        f.coeff_mask(0)
    }

    /// Keeps only terms not involving index `m`.
    pub fn without_index(&self, m: usize) -> Self {
        let mut out = Form::zero(self.dim, self.degree);
        for (mask, c) in &self.terms {
            if mask & (1 << m) == 0 {
                out.add_to_mask(*mask, c.clone());
            }
        }
        out
    }

    /// Re-indexes a form supported on `keep` (in order) into `keep.len()` dimensions.
    pub fn restrict_to(&self, keep: &[usize]) -> Result<Self, ExteriorError> {
        let mut out = Form::zero(keep.len(), self.degree);
        for (mask, c) in &self.terms {
            let mut idx = Vec::with_capacity(self.degree);
            for i in indices_of(*mask) {
                match keep.iter().position(|&k| k == i) {
                    Some(p) => idx.push(p),
                    None => return Err(ExteriorError::Support(i)),
                }
            }
            out.add_term(&idx, c.clone());
        }
        Ok(out)
    }

    /// Inverse of [`Form::restrict_to`].
    pub fn extend_from(&self, keep: &[usize], dim: usize) -> Self {
        let mut out = Form::zero(dim, self.degree);
        for (mask, c) in &self.terms {
            let idx: Vec<usize> = indices_of(*mask).into_iter().map(|i| keep[i]).collect();
            out.add_term(&idx, c.clone());
        }
        out
    }

    /// Coefficient of the volume form `e^{1...n}`.
    pub fn top_coeff(&self) -> C {
        if self.degree != self.dim {
            return C::zero();
        }
        self.coeff_mask(((1u64 << self.dim) - 1) as Mask)
    }

    /// `self^k` under the wedge product.
    pub fn power(&self, k: usize) -> Self {
        let mut out = Form::constant(self.dim, C::one());
        for _ in 0..k {
            out = out.wedge(self);
        }
        out
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        assert_eq!((self.dim, self.degree), (o.dim, o.degree), "adding forms of different shape");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_to_mask(*m, if negate { c.negated() } else { c.clone() });
        }
        out
    }
}

impl<C: Coeff> Add for &Form<C> {
    type Output = Form<C>;
    fn add(self, o: &Form<C>) -> Form<C> {
        self.combine(o, false)
    }
}

impl<C: Coeff> Sub for &Form<C> {
    type Output = Form<C>;
    fn sub(self, o: &Form<C>) -> Form<C> {
        self.combine(o, true)
    }
}

impl<C: Coeff> Add for Form<C> {
    type Output = Form<C>;
    fn add(self, o: Form<C>) -> Form<C> {
        self.combine(&o, false)
    }
}

impl<C: Coeff> Sub for Form<C> {
    type Output = Form<C>;
    fn sub(self, o: Form<C>) -> Form<C> {
        self.combine(&o, true)
    }
}

impl<C: Coeff> Neg for &Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        self.map(|c| c.negated())
    }
}

impl<C: Coeff> Neg for Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        -&self
    }
}

impl Form<Scalar> {
    /// `f.α` with `(f.α)(X1..Xk) = -Σ α(.., f Xi, ..)`; `f` acts on the ambient space.
    pub fn endo_action(&self, f: &Matrix) -> Self {
        assert!(f.rows() == self.dim && f.cols() == self.dim, "endomorphism size mismatch");
        let mut out = Form::zero(self.dim, self.degree);
        for (mask, c) in &self.terms {
            let idx = indices_of(*mask);
            for s in 0..idx.len() {
                let i = idx[s];
                for j in 0..self.dim {
                    let fij = f.get(i, j);
                    if fij.is_zero() {
                        continue;
                    }
                    let mut t = idx.clone();
                    t[s] = j;
                    if let Some((m2, sign)) = sort_with_sign(&t) {
                        let mut v = -(c * fij);
                        if sign < 0 {
                            v = -v;
                        }
                        out.add_to_mask(m2, v);
                    }
                }
            }
        }
        out
    }

    /// `L*α` for `L` mapping an `L.cols()`-space into this form's space.
    pub fn pullback(&self, l: &Matrix) -> Self {
        assert_eq!(l.rows(), self.dim, "pullback target dimension mismatch");
        let m = l.cols();
        let pulled: Vec<Form> = (0..self.dim)
            .map(|i| {
                let mut e = Form::zero(m, 1);
                for j in 0..m {
                    e.add_to_mask(1 << j, l.get(i, j).clone());
                }
                e
            })
            .collect();
        let mut out = Form::zero(m, self.degree);
        for (mask, c) in &self.terms {
            let mut t = Form::constant(m, c.clone());
            for i in indices_of(*mask) {
                t = t.wedge(&pulled[i]);
            }
            out = &out + &t;
        }
        out
    }

    pub fn to_f64(&self) -> Option<RealForm> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.terms {
            out.add_to_mask(*m, c.to_f64()?);
        }
        Some(out)
    }

    pub fn is_constant_coefficient(&self) -> bool {
        self.terms.values().all(Scalar::is_constant)
    }
}

impl Instantiate for Form<Scalar> {
    fn instantiate(&self, a: &Assignment) -> Self {
        self.map(|c| c.instantiate(a))
    }
}

impl Form<f64> {
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let d = self - o;
        d.terms.values().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, idx: &[usize]) -> KForm {
        Form::basis(dim, idx)
    }

    #[test]
    fn wedge_basics() {
        assert_eq!(e(4, &[0]).wedge(&e(4, &[1])), e(4, &[0, 1]));
        assert!(e(4, &[0, 1]).wedge(&e(4, &[0])).is_zero());
        let s = &e(4, &[0, 2]) + &e(4, &[1, 3]);
        let sq = s.wedge(&s);
        assert_eq!(sq.coeff(&[0, 1, 2, 3]), Scalar::int(-2));
    }

    #[test]
    fn interior_signs() {
        assert_eq!(e(3, &[0, 1]).interior_basis(0), e(3, &[1]));
        assert!(e(3, &[0, 1]).interior_basis(2).is_zero());
        assert_eq!(e(3, &[0, 1, 2]).interior_basis(1), -e(3, &[0, 2]));
    }

    #[test]
    fn evaluation_is_determinant() {
        let f = e(3, &[0, 1]);
        let x = vec![Scalar::int(1), Scalar::int(2), Scalar::int(0)];
        let y = vec![Scalar::int(3), Scalar::int(5), Scalar::int(7)];
        assert_eq!(f.evaluate(&[x.clone(), y.clone()]), Scalar::int(5 - 6));
        assert_eq!(f.evaluate(&[y, x]), Scalar::int(1));
    }

    #[test]
    fn unsorted_basis_sign() {
        assert_eq!(e(5, &[0, 3, 1, 4]), -e(5, &[0, 1, 3, 4]));
    }

    #[test]
    fn endo_action_examples() {
        let f = Matrix::identity(3);
        assert_eq!(e(3, &[0, 1]).endo_action(&f), e(3, &[0, 1]).scale(&Scalar::int(-2)));
        let a = Scalar::param("a1");
        let b = Scalar::param("a2");
        let d = Matrix::diagonal(&[a.clone(), b.clone(), Scalar::zero()]);
        assert_eq!(e(3, &[0, 1]).endo_action(&d), e(3, &[0, 1]).scale(&-(&a + &b)));
        // f(e4) = e5 only: f.e^{56} = -e^{46} and e^{46} is invariant
        let mut g = Matrix::zeros(6, 6);
        g.set(4, 3, Scalar::one());
        assert_eq!(e(6, &[4, 5]).endo_action(&g), -e(6, &[3, 5]));
        assert!(e(6, &[3, 5]).endo_action(&g).is_zero());
    }

    #[test]
    fn pullback_examples() {
        let a = e(3, &[0, 1]);
        assert_eq!(a.pullback(&Matrix::identity(3)), a);
        assert!(a.pullback(&Matrix::zeros(3, 3)).is_zero());
        let swap = Matrix::from_ints(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 1]);
        assert_eq!(a.pullback(&swap), -a.clone());
    }

    #[test]
    fn restrict_roundtrip() {
        let a = &e(7, &[0, 2]) - &e(7, &[1, 5]);
        let keep = [0, 1, 2, 5];
        let r = a.restrict_to(&keep).unwrap();
        assert_eq!(r.dim(), 4);
        assert_eq!(r.extend_from(&keep, 7), a);
        assert!(e(7, &[6]).restrict_to(&keep).is_err());
    }
}
