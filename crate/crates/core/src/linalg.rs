//! Dense matrices over [`Scalar`] and division-free-by-parameter elimination.
//!
//! Pivots are always nonzero *constants*. When a column only offers
//! parametric entries it is skipped; if rows remain that cannot be reduced
//! the rank depends on the parameters and we refuse with
//! [`LinalgError::ParametricPivot`] instead of guessing.

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::scalar::{Assignment, Instantiate, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("rank depends on parameters ({0}); instantiate them first")]
    ParametricPivot(String),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
}

pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Scalar], s: &Scalar) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vector]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Matrix::from_fn(r, c, |i, j| rows[i][j].clone())
    }

    /// Columns given as vectors; `rows` fixes the height when `cols` is empty.
    pub fn from_columns(rows: usize, cols: &[Vector]) -> Self {
        assert!(cols.iter().all(|v| v.len() == rows), "column length mismatch");
        Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix::from_fn(rows, cols, |i, j| Scalar::int(entries[i * cols + j]))
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Scalar::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector size mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product size mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_add(&self.data, &o.data) }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_sub(&self.data, &o.data) }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: vec_scale(&self.data, s) }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&Scalar::int(-1))
    }

    /// `self * o - o * self`.
    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }

    /// Sub-block with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows);
        Matrix::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols);
        Matrix::from_fn(self.rows + o.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                o.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn rank(&self) -> Result<usize, LinalgError> {
        Ok(row_reduce(self.row_vectors(), self.cols)?.pivots.len())
    }

    /// Basis of `{x : self x = 0}`.
    pub fn nullspace(&self) -> Result<Vec<Vector>, LinalgError> {
        let e = row_reduce(self.row_vectors(), self.cols)?;
        Ok(e.nullspace())
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let e = row_reduce_limited(aug.row_vectors(), 2 * n, n)?;
        if e.pivots.len() < n {
            return Err(LinalgError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| e.rows[i][n + j].clone()))
    }

    /// One solution of `self x = b` (free variables set to zero) plus a kernel basis.
    pub fn solve(&self, b: &[Scalar]) -> Result<(Vector, Vec<Vector>), LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch("right-hand side length".into()));
        }
        let n = self.cols;
        let aug: Vec<Vector> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i);
                r.push(b[i].clone());
                r
            })
            .collect();
        let e = row_reduce_limited(aug, n + 1, n)?;
        if e.inconsistent {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = zero_vector(n);
        for (r, &p) in e.pivots.iter().enumerate() {
            x[p] = e.rows[r][n].clone();
        }
        let kernel = Echelon { rows: e.rows.iter().map(|r| r[..n].to_vec()).collect(), pivots: e.pivots.clone(), cols: n, inconsistent: false }
            .nullspace();
        Ok((x, kernel))
    }

    /// Least-norm solution (orthogonal to the kernel) plus a kernel basis.
    pub fn solve_least_norm(&self, b: &[Scalar]) -> Result<(Vector, Vec<Vector>), LinalgError> {
        let (x, kernel) = self.solve(b)?;
        Ok((project_out(&x, &kernel)?, kernel))
    }

    pub fn is_invertible(&self) -> Result<bool, LinalgError> {
        Ok(self.is_square() && self.rank()? == self.rows)
    }

    pub fn to_f64(&self) -> Option<nalgebra::DMatrix<f64>> {
        let mut vals = Vec::with_capacity(self.data.len());
        for s in &self.data {
            vals.push(s.to_f64()?);
        }
        Some(nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &vals))
    }
}

/// Removes from `x` its orthogonal projection onto `span(kernel)`.
pub fn project_out(x: &[Scalar], kernel: &[Vector]) -> Result<Vector, LinalgError> {
    if kernel.is_empty() {
        return Ok(x.to_vec());
    }
    let k = kernel.len();
    let gram = Matrix::from_fn(k, k, |i, j| dot(&kernel[i], &kernel[j]));
    let rhs: Vector = kernel.iter().map(|v| dot(v, x)).collect();
    let (c, _) = gram.solve(&rhs)?;
    let mut out = x.to_vec();
    for (ci, v) in c.iter().zip(kernel) {
        out = vec_sub(&out, &vec_scale(v, ci));
    }
    Ok(out)
}

impl Instantiate for Matrix {
    fn instantiate(&self, a: &Assignment) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|s| s.instantiate(a)).collect() }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

/// Reduced rows with a constant unit pivot each.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vector>,
    pub pivots: Vec<usize>,
    pub cols: usize,
    /// Set by augmented solves when a row reduces to `0 = nonzero`.
    pub inconsistent: bool,
}

impl Echelon {
    pub fn nullspace(&self) -> Vec<Vector> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = zero_vector(self.cols);
                x[fc] = Scalar::one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    x[p] = -&self.rows[r][fc];
                }
                x
            })
            .collect()
    }
}

pub fn row_reduce(rows: Vec<Vector>, cols: usize) -> Result<Echelon, LinalgError> {
    row_reduce_limited(rows, cols, cols)
}

/// Gauss-Jordan with pivots taken only in the first `pivot_cols` columns.
pub fn row_reduce_limited(mut rows: Vec<Vector>, cols: usize, pivot_cols: usize) -> Result<Echelon, LinalgError> {
    if rows.iter().any(|r| r.len() != cols) {
        return Err(LinalgError::DimensionMismatch("row length".into()));
    }
    let mut pivots = Vec::new();
    let mut done = 0;
    for col in 0..pivot_cols {
        if done == rows.len() {
            break;
        }
        let Some(pr) = (done..rows.len()).find(|&r| {
            let e = &rows[r][col];
            !e.is_zero() && e.is_constant()
        }) else {
            continue;
        };
        rows.swap(done, pr);
        let inv = rows[done][col].constant().expect("constant pivot").recip();
        rows[done] = rows[done].iter().map(|x| x.scale(&inv)).collect();
        let pivot_row = rows[done].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == done || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&factor * p);
                }
            }
        }
        pivots.push(col);
        done += 1;
    }
    let mut inconsistent = false;
    for r in &rows[done..] {
        let head = &r[..pivot_cols];
        if !is_zero_vector(head) {
            let witness = head.iter().find(|s| !s.is_zero()).map(|s| s.to_string()).unwrap_or_default();
            return Err(LinalgError::ParametricPivot(format!("undecidable entry {witness}")));
        }
        let tail = &r[pivot_cols..];
        if !is_zero_vector(tail) {
            if tail.iter().all(Scalar::is_constant) {
                inconsistent = true;
            } else {
                return Err(LinalgError::ParametricPivot("consistency depends on parameters".into()));
            }
        }
    }
    rows.truncate(done);
    Ok(Echelon { rows, pivots, cols, inconsistent })
}

/// Rational number helper used by tests and dataset builders.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_ints(3, 3, &[2, 1, 0, 0, 1, 3, 1, 0, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
    }

    #[test]
    fn singular_detected() {
        let m = Matrix::from_ints(2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.inverse(), Err(LinalgError::Singular));
        assert_eq!(m.nullspace().unwrap().len(), 1);
    }

    #[test]
    fn parametric_pivot_refused() {
        let a = Scalar::param("a");
        let m = Matrix::from_rows(&[vec![a.clone(), Scalar::zero()], vec![Scalar::zero(), Scalar::one()]]);
        assert!(matches!(m.rank(), Err(LinalgError::ParametricPivot(_))));
    }

    #[test]
    fn parametric_column_skipped_when_decidable() {
        // rows (a, 1) and (0, 0): rank 1 regardless of a
        let a = Scalar::param("a");
        let m = Matrix::from_rows(&[vec![a, Scalar::one()], vec![Scalar::zero(), Scalar::zero()]]);
        assert_eq!(m.rank().unwrap(), 1);
    }

    #[test]
    fn solve_and_least_norm() {
        let m = Matrix::from_ints(1, 2, &[1, 1]);
        let (x, k) = m.solve_least_norm(&[Scalar::int(2)]).unwrap();
        assert_eq!(x, vec![Scalar::int(1), Scalar::int(1)]);
        assert_eq!(k.len(), 1);
        let bad = Matrix::from_ints(2, 1, &[1, 1]);
        assert_eq!(bad.solve(&[Scalar::int(1), Scalar::int(2)]), Err(LinalgError::Inconsistent));
    }
}
