use crate::linalg::{unit_vector, Matrix, Vector};

use super::algebra::LieAlgebra;
use super::subspace::Subspace;
use super::LieError;

/// Derived and lower central series, centre, and the resulting lengths.
#[derive(Clone, Debug)]
pub struct CharacteristicSeries {
    /// `g = s^(0) ⊇ s^(1) ⊇ ...` until zero or stable.
    pub derived: Vec<Subspace>,
    /// `g = n_0 ⊇ n_1 = [g,g] ⊇ ...` until zero or stable.
    pub lower_central: Vec<Subspace>,
    pub center: Subspace,
    pub is_solvable: bool,
    pub is_nilpotent: bool,
    /// First `r` with `s^(r) = 0`.
    pub derived_length: Option<usize>,
    /// First `r` with `n_r = 0`.
    pub nilpotency_step: Option<usize>,
}

/// `span [a, b]` over basis vectors of `a` and `b`.
pub fn bracket_span(g: &LieAlgebra, a: &Subspace, b: &Subspace) -> Result<Subspace, LieError> {
    let mut v: Vec<Vector> = Vec::new();
    for x in a.basis() {
        for y in b.basis() {
            let z = g.bracket(x, y);
            if !crate::linalg::is_zero_vector(&z) {
                v.push(z);
            }
        }
    }
    Ok(Subspace::span(g.dim(), &v)?)
}

pub fn derived_series(g: &LieAlgebra) -> Result<Vec<Subspace>, LieError> {
    let mut out = vec![Subspace::full(g.dim())];
    loop {
        let last = out.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let next = bracket_span(g, last, last)?;
        if next.dim() == last.dim() {
            break;
        }
        out.push(next);
    }
    Ok(out)
}

pub fn center(g: &LieAlgebra) -> Result<Subspace, LieError> {
    let n = g.dim();
    // x ∈ z(g) iff Σ_i x_i [e_i, e_j] = 0 for every j
    let rows: Vec<Vector> = (0..n)
        .flat_map(|j| (0..n).map(move |k| (j, k)))
        .map(|(j, k)| (0..n).map(|i| g.structure_constant(i, j, k)).collect())
        .collect();
    let m = Matrix::from_rows(&rows);
    Ok(Subspace::span(n, &m.nullspace()?)?)
}

pub fn characteristic_series(g: &LieAlgebra) -> Result<CharacteristicSeries, LieError> {
    let n = g.dim();
    let full = Subspace::full(n);
    let derived = derived_series(g)?;
    let mut lower = vec![full.clone()];
    loop {
        let last = lower.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let next = bracket_span(g, &full, last)?;
        if next.dim() == last.dim() {
            break;
        }
        lower.push(next);
    }
    let is_solvable = derived.last().is_some_and(Subspace::is_zero);
    let is_nilpotent = lower.last().is_some_and(Subspace::is_zero);
    Ok(CharacteristicSeries {
        derived_length: is_solvable.then(|| derived.len() - 1),
        nilpotency_step: is_nilpotent.then(|| lower.len() - 1),
        derived,
        lower_central: lower,
        center: center(g)?,
        is_solvable,
        is_nilpotent,
    })
}

pub fn derived_length(g: &LieAlgebra) -> Result<Option<usize>, LieError> {
    let d = derived_series(g)?;
    Ok(d.last().is_some_and(Subspace::is_zero).then(|| d.len() - 1))
}

pub fn is_ideal(g: &LieAlgebra, a: &Subspace) -> bool {
    let n = g.dim();
    (0..n).all(|i| a.basis().iter().all(|b| a.contains(&g.bracket(&unit_vector(n, i), b))))
}

/// `[a, a] = 0` and `[g, a] ⊆ a`, exactly.
pub fn is_abelian_ideal(g: &LieAlgebra, a: &Subspace) -> bool {
    let b = a.basis();
    let abelian = b.iter().enumerate().all(|(i, x)| b[i + 1..].iter().all(|y| crate::linalg::is_zero_vector(&g.bracket(x, y))));
    abelian && is_ideal(g, a)
}

/// Quotient algebra with the projection `g → complement ≅ g/ideal`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: LieAlgebra,
    /// `q × n`: coordinates along the complement basis, killing the ideal.
    pub projection: Matrix,
    pub complement: Subspace,
}

pub fn quotient(g: &LieAlgebra, ideal: &Subspace, complement: Option<&Subspace>) -> Result<Quotient, LieError> {
    let n = g.dim();
    if ideal.ambient() != n {
        return Err(LieError::DimensionMismatch("ideal lives in another space".into()));
    }
    if !is_ideal(g, ideal) {
        return Err(LieError::NotIdeal);
    }
    let comp = match complement {
        Some(c) => c.clone(),
        None => ideal.pivot_complement(),
    };
    let q = comp.dim();
    if q + ideal.dim() != n {
        return Err(LieError::BadComplement);
    }
    let m = comp.basis_matrix().hstack(&ideal.basis_matrix());
    let inv = m.inverse().map_err(|e| match e {
        crate::linalg::LinalgError::Singular => LieError::BadComplement,
        other => other.into(),
    })?;
    let projection = inv.select(&(0..q).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
    let cb = comp.basis();
    let mut entries = Vec::new();
    for a in 0..q {
        for b in a + 1..q {
            entries.push(((a, b), projection.mul_vec(&g.bracket(&cb[a], &cb[b]))));
        }
    }
    let labels = cb
        .iter()
        .enumerate()
        .map(|(a, v)| {
            let ones: Vec<usize> = (0..n).filter(|&i| !v[i].is_zero()).collect();
            match ones.as_slice() {
                [i] if v[*i].is_one() => g.labels()[*i].clone(),
                _ => format!("c{}", a + 1),
            }
        })
        .collect();
    let algebra = LieAlgebra::from_brackets(q, entries)?.with_labels(labels);
    Ok(Quotient { algebra, projection, complement: comp })
}

/// Block-diagonal sum `g ⊕ h`.
pub fn direct_sum(g: &LieAlgebra, h: &LieAlgebra) -> LieAlgebra {
    let (n, m) = (g.dim(), h.dim());
    let mut entries = Vec::new();
    for ((i, j), v) in g.nonzero_brackets() {
        let mut w = v.clone();
        w.extend(std::iter::repeat(crate::scalar::Scalar::zero()).take(m));
        entries.push(((*i, *j), w));
    }
    for ((i, j), v) in h.nonzero_brackets() {
        let mut w = vec![crate::scalar::Scalar::zero(); n];
        w.extend(v.iter().cloned());
        entries.push(((n + i, n + j), w));
    }
    LieAlgebra::from_brackets(n + m, entries).expect("block brackets are in range")
}

/// Basis of `der(g)`, solving `D[x,y] = [Dx,y] + [x,Dy]` on basis pairs.
pub fn derivations(g: &LieAlgebra) -> Result<Vec<Matrix>, LieError> {
    let n = g.dim();
    let var = |r: usize, s: usize| r * n + s;
    let mut rows: Vec<Vector> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let b = g.bracket_basis(i, j);
            for c in 0..n {
                let mut row = vec![crate::scalar::Scalar::zero(); n * n];
                for a in 0..n {
                    row[var(c, a)] = &row[var(c, a)] + &b[a];
                    row[var(a, i)] = &row[var(a, i)] - &g.structure_constant(a, j, c);
                    row[var(a, j)] = &row[var(a, j)] - &g.structure_constant(i, a, c);
                }
                if !crate::linalg::is_zero_vector(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let sols = if rows.is_empty() {
        (0..n * n).map(|k| unit_vector(n * n, k)).collect()
    } else {
        Matrix::from_rows(&rows).nullspace()?
    };
    Ok(sols.into_iter().map(|v| Matrix::from_fn(n, n, |r, s| v[var(r, s)].clone())).collect())
}

/// `g ⋊_D ℝ` with the new vector `X = e_{n+1}` acting by `ad(X)|_g = D`.
pub fn semidirect(g: &LieAlgebra, d: &Matrix) -> Result<LieAlgebra, LieError> {
    let n = g.dim();
    if d.rows() != n || d.cols() != n {
        return Err(LieError::DimensionMismatch("derivation must act on the algebra".into()));
    }
    let pad = |v: &[crate::scalar::Scalar]| {
        let mut w = v.to_vec();
        w.push(crate::scalar::Scalar::zero());
        w
    };
    let mut entries: Vec<((usize, usize), Vector)> = g.nonzero_brackets().map(|(&k, v)| (k, pad(v))).collect();
    for i in 0..n {
        entries.push(((n, i), pad(&d.column(i))));
    }
    LieAlgebra::from_brackets(n + 1, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::KForm;
    use crate::scalar::Scalar;

    fn heis() -> LieAlgebra {
        LieAlgebra::from_differentials(&[KForm::zero(3, 2), KForm::zero(3, 2), KForm::basis(3, &[0, 1])]).unwrap()
    }

    #[test]
    fn abelian_series() {
        let s = characteristic_series(&LieAlgebra::abelian(4)).unwrap();
        assert!(s.is_solvable && s.is_nilpotent);
        assert_eq!(s.derived_length, Some(1));
        assert_eq!(s.nilpotency_step, Some(1));
        assert_eq!(s.center.dim(), 4);
    }

    #[test]
    fn heisenberg_series() {
        let s = characteristic_series(&heis()).unwrap();
        assert_eq!(s.derived_length, Some(2));
        assert_eq!(s.nilpotency_step, Some(2));
        assert!(s.center.same_as(&Subspace::coordinate(3, &[2])));
    }

    #[test]
    fn quotient_by_center() {
        let h = heis();
        let z = center(&h).unwrap();
        let q = quotient(&h, &z, None).unwrap();
        assert!(q.algebra.is_abelian());
        assert_eq!(q.algebra.dim(), 2);
        assert_eq!(q.algebra.labels(), &["e1".to_string(), "e2".to_string()]);
        let same = quotient(&h, &Subspace::zero(3), None).unwrap();
        assert_eq!(same.algebra, h);
    }

    #[test]
    fn non_ideal_rejected() {
        assert!(matches!(quotient(&heis(), &Subspace::coordinate(3, &[0]), None), Err(LieError::NotIdeal)));
    }

    #[test]
    fn derivations_of_heisenberg() {
        let d = derivations(&heis()).unwrap();
        assert_eq!(d.len(), 6);
        let g = semidirect(&heis(), &Matrix::diagonal(&[Scalar::int(1), Scalar::int(2), Scalar::int(3)])).unwrap();
        assert!(crate::lie::jacobi_check(&g).passed);
        assert_eq!(derived_length(&g).unwrap(), Some(3));
        assert_eq!(derivations(&LieAlgebra::abelian(2)).unwrap().len(), 4);
    }

    #[test]
    fn sums() {
        let s = direct_sum(&heis(), &LieAlgebra::abelian(3));
        let cs = characteristic_series(&s).unwrap();
        assert_eq!(s.dim(), 6);
        assert_eq!(cs.nilpotency_step, Some(2));
        assert_eq!(cs.center.dim(), 4);
        assert!(is_abelian_ideal(&s, &cs.center));
        assert_eq!(direct_sum(&LieAlgebra::abelian(1), &LieAlgebra::abelian(1)), LieAlgebra::abelian(2));
    }
}
