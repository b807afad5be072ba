//! Seeded random instances: algebras, shear data and complex structures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{KForm, VForm, ValueSpace};
use crate::geom_g2::{aa_build_data, AaShear, AlmostAbelian};
use crate::lie::{center, derivations, derived_length, direct_sum, jacobi_check, semidirect, LieAlgebra, Subspace};
use crate::linalg::{unit_vector, Matrix, Vector};
use crate::scalar::Scalar;
use crate::shear::{shear, validate, ShearData};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut CorpusRng, bound: i64) -> Scalar {
    Scalar::int(rng.gen_range(-bound..=bound))
}

fn nonzero(rng: &mut CorpusRng, bound: i64) -> Scalar {
    let v = rng.gen_range(1..=bound);
    Scalar::int(if rng.gen_bool(0.5) { v } else { -v })
}

pub fn random_matrix(rng: &mut CorpusRng, rows: usize, cols: usize, bound: i64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| small(rng, bound))
}

/// Product of a unit lower and a unit upper triangular integer matrix.
pub fn random_unimodular(rng: &mut CorpusRng, n: usize) -> Matrix {
    let l = Matrix::from_fn(n, n, |i, j| if i == j { Scalar::one() } else if i > j { small(rng, 1) } else { Scalar::zero() });
    let u = Matrix::from_fn(n, n, |i, j| if i == j { Scalar::one() } else if i < j { small(rng, 1) } else { Scalar::zero() });
    l.mul(&u)
}

pub fn random_form(rng: &mut CorpusRng, n: usize, k: usize, bound: i64) -> KForm {
    let mut f = KForm::zero(n, k);
    for _ in 0..rng.gen_range(1..=4) {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        idx.truncate(k);
        f.add_term(&idx, nonzero(rng, bound));
    }
    f
}

/// Non-abelian nilpotent algebra with `de^k ∈ Λ²⟨e^1..e^{k-1}⟩`, filtered by `d² = 0`.
pub fn random_nilpotent(rng: &mut CorpusRng, n: usize) -> LieAlgebra {
    assert!(n >= 3, "no non-abelian nilpotent algebra below dimension 3");
    loop {
        let des: Vec<KForm> = (0..n)
            .map(|k| {
                let mut f = KForm::zero(n, 2);
                if k >= 2 {
                    for _ in 0..rng.gen_range(0..=2) {
                        let i = rng.gen_range(0..k - 1);
                        let j = rng.gen_range(i + 1..k);
                        f.add_term(&[i, j], nonzero(rng, 2));
                    }
                }
                f
            })
            .collect();
        if let Ok(g) = LieAlgebra::from_differentials(&des) {
            if !g.is_abelian() && jacobi_check(&g).passed {
                return g;
            }
        }
    }
}

/// `ℝ^{n-1} ⋊ ℝ` with a random integer matrix; the last vector acts.
pub fn random_almost_abelian(rng: &mut CorpusRng, n: usize) -> LieAlgebra {
    loop {
        let f = random_matrix(rng, n - 1, n - 1, 2);
        if !f.is_zero() {
            return semidirect(&LieAlgebra::abelian(n - 1), &f).expect("square action");
        }
    }
}

/// `h ⋊_D ℝ` for a random nilpotent `h` of dimension `n - 1` and a random derivation `D`.
pub fn random_nilpotent_extension(rng: &mut CorpusRng, n: usize) -> LieAlgebra {
    let h = random_nilpotent(rng, n - 1);
    let ders = derivations(&h).expect("constant coefficients");
    let d = random_combination(rng, &ders, 2);
    semidirect(&h, &d).expect("derivation of the right size")
}

pub fn random_combination(rng: &mut CorpusRng, basis: &[Matrix], bound: i64) -> Matrix {
    let (r, c) = (basis[0].rows(), basis[0].cols());
    basis.iter().fold(Matrix::zeros(r, c), |acc, m| acc.add(&m.scale(&small(rng, bound))))
}

/// Solvable algebra with derived length in `2..=3`, in a scrambled basis.
pub fn random_solvable(rng: &mut CorpusRng, n: usize) -> LieAlgebra {
    assert!(n >= 4, "the generators need dimension at least 4");
    loop {
        let g = match rng.gen_range(0..3) {
            0 => random_almost_abelian(rng, n),
            1 => random_nilpotent_extension(rng, n),
            _ => {
                let m = rng.gen_range(3..n);
                direct_sum(&random_nilpotent_extension(rng, m + 1), &LieAlgebra::abelian(n - m - 1))
            }
        };
        let g = g.change_basis(&random_unimodular(rng, n)).expect("invertible");
        if matches!(derived_length(&g), Ok(Some(2..=3))) {
            return g;
        }
    }
}

/// Any of the generators above, for round-trip and identity checks.
pub fn random_algebra(rng: &mut CorpusRng, n: usize) -> LieAlgebra {
    match rng.gen_range(0..if n >= 4 { 3 } else { 2 }) {
        0 => random_nilpotent(rng, n),
        1 => random_almost_abelian(rng, n),
        _ => random_solvable(rng, n),
    }
}

/// Basis of closed 2-forms `β` with `v ⌟ β = 0` for every `v` in `kill`.
pub fn closed_two_forms(g: &LieAlgebra, kill: &[Vector]) -> Vec<KForm> {
    let n = g.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let images: Vec<KForm> = pairs.iter().map(|&(i, j)| crate::lie::ce_differential(g, &KForm::basis(n, &[i, j]))).collect();
    let mut rows: Vec<Vector> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                rows.push(images.iter().map(|d| d.coeff(&[i, j, k])).collect());
            }
        }
    }
    for v in kill {
        let ints: Vec<KForm> = pairs.iter().map(|&(i, j)| KForm::basis(n, &[i, j]).interior(v)).collect();
        for q in 0..n {
            rows.push(ints.iter().map(|c| c.coeff(&[q])).collect());
        }
    }
    let sols = if rows.is_empty() {
        (0..pairs.len()).map(|k| unit_vector(pairs.len(), k)).collect()
    } else {
        Matrix::from_rows(&rows).nullspace().expect("constant coefficients")
    };
    sols.iter()
        .map(|s| {
            let mut f = KForm::zero(n, 2);
            for (c, &(i, j)) in s.iter().zip(&pairs) {
                f.add_term(&[i, j], c.clone());
            }
            f
        })
        .collect()
}

/// Twist data `ξ: a → z(g)`, `ω` closed with `ξ ⌟ ω = 0`; `None` if `g` has no centre to use.
pub fn random_twist(rng: &mut CorpusRng, g: &LieAlgebra) -> Option<ShearData> {
    let z = center(g).ok()?;
    if z.is_zero() {
        return None;
    }
    let k = rng.gen_range(1..=z.dim().min(2));
    let xi_cols: Vec<Vector> = (0..k).map(|_| (0..z.dim()).map(|_| small(rng, 2)).collect::<Vector>()).collect();
    let xi = z.basis_matrix().mul(&Matrix::from_columns(z.dim(), &xi_cols));
    if xi.rank().ok()? != k {
        return None;
    }
    let closed = closed_two_forms(g, &xi.columns());
    if closed.is_empty() {
        return None;
    }
    let comps: Vec<KForm> = (0..k)
        .map(|_| closed.iter().fold(KForm::zero(g.dim(), 2), |acc, b| &acc + &b.scale(&small(rng, 2))))
        .collect();
    if comps.iter().all(KForm::is_zero) {
        return None;
    }
    let omega = VForm::new(ValueSpace::abstract_space("a", k), comps).ok()?;
    ShearData::twist(g.clone(), xi, omega).ok()
}

/// Almost Abelian shear data on `ℝⁿ⁻¹ ⋊_f ℝ` with diagonal `f`, with `ν` solved from
/// `f.ω₀ = -(f+ν)∘ω₀`; only data passing [`validate`] is returned.
pub fn random_aa_shear(rng: &mut CorpusRng, g: &LieAlgebra) -> Option<AaShear> {
    let n = g.dim();
    let aa = AlmostAbelian::new(g, n - 1).ok()?;
    let u: Vec<usize> = (0..n - 1).collect();
    let mut shuffled = u.clone();
    shuffled.shuffle(rng);
    let ka = rng.gen_range(1..=2.min(n - 3));
    let a_idx: Vec<usize> = {
        let mut v = shuffled[..ka].to_vec();
        v.sort();
        v
    };
    let rest: Vec<usize> = u.iter().copied().filter(|i| !a_idx.contains(i)).collect();
    let a = Subspace::coordinate(n, &a_idx);
    if !a.is_invariant(aa.f()) {
        return None;
    }
    let mut comps = vec![KForm::zero(n, 2); n];
    for &k in &a_idx {
        for _ in 0..rng.gen_range(1..=2) {
            let mut pick = rest.clone();
            pick.shuffle(rng);
            comps[k].add_term(&[pick[0], pick[1]], nonzero(rng, 2));
        }
    }
    if comps.iter().all(KForm::is_zero) {
        return None;
    }
    let f = aa.f();
    // unknowns ν_{kl} for k, l ∈ a; the other columns of ν are free
    let vars: Vec<(usize, usize)> = a_idx.iter().flat_map(|&k| a_idx.iter().map(move |&l| (k, l))).collect();
    let masks: Vec<Vec<usize>> = (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &k in &a_idx {
        let mut target = comps[k].endo_action(f).scale(&Scalar::int(-1));
        for l in 0..n {
            if !f.get(k, l).is_zero() {
                target = &target - &comps[l].scale(f.get(k, l));
            }
        }
        for m in &masks {
            rows.push(vars.iter().map(|&(kk, l)| if kk == k { comps[l].coeff(m) } else { Scalar::zero() }).collect::<Vector>());
            rhs.push(target.coeff(m));
        }
    }
    let (sol, kernel) = Matrix::from_rows(&rows).solve(&rhs).ok()?;
    let mut nu = Matrix::zeros(n, n);
    for (v, &(k, l)) in sol.iter().zip(&vars) {
        let extra = kernel.iter().fold(Scalar::zero(), |acc, kv| &acc + &(&kv[vars.iter().position(|p| *p == (k, l)).unwrap()] * &small(rng, 1)));
        nu.set(k, l, v + &extra);
    }
    for &k in &a_idx {
        for &l in &rest {
            if rng.gen_bool(0.3) {
                nu.set(k, l, small(rng, 2));
            }
        }
    }
    let basis: Vec<Vector> = (0..n).map(|i| unit_vector(n, i)).collect();
    let w = VForm::new(ValueSpace::embedded("g", basis), comps).ok()?;
    let s = aa_build_data(&aa, &a, &w, &nu).ok()?;
    (s.remaining_condition() && validate(s.data()).passed()).then_some(s)
}

/// Diagonal `ℝ^{n-1} ⋊ ℝ` with distinct small entries, the usual host for [`random_aa_shear`].
pub fn random_diagonal_aa(rng: &mut CorpusRng, n: usize) -> LieAlgebra {
    let d: Vec<Scalar> = (0..n - 1).map(|_| small(rng, 3)).collect();
    semidirect(&LieAlgebra::abelian(n - 1), &Matrix::diagonal(&d)).expect("square action")
}

/// Any valid shear data: a twist or an almost Abelian shear.
pub fn random_shear_data(rng: &mut CorpusRng, n: usize) -> ShearData {
    loop {
        if rng.gen_bool(0.5) {
            let g = random_algebra(rng, n);
            if let Some(d) = random_twist(rng, &g) {
                if validate(&d).passed() && shear(&d).is_ok() {
                    return d;
                }
            }
        } else {
            let g = random_diagonal_aa(rng, n);
            if let Some(s) = random_aa_shear(rng, &g) {
                if shear(s.data()).is_ok() {
                    return s.data().clone();
                }
            }
        }
    }
}

/// `P J₀ P⁻¹` for the standard `J₀ e_{2i-1} = e_{2i}`.
pub fn random_complex_structure(rng: &mut CorpusRng, n: usize) -> Matrix {
    let mut j0 = Matrix::zeros(n, n);
    for i in (0..n).step_by(2) {
        j0.set(i + 1, i, Scalar::one());
        j0.set(i, i + 1, Scalar::int(-1));
    }
    let p = random_unimodular(rng, n);
    p.mul(&j0).mul(&p.inverse().expect("unimodular"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_produce_lie_algebras() {
        let mut r = rng(7);
        for _ in 0..10 {
            let g = random_solvable(&mut r, 5);
            assert!(jacobi_check(&g).passed);
            assert!(matches!(derived_length(&g).unwrap(), Some(2..=3)));
        }
    }

    #[test]
    fn shear_data_is_valid() {
        let mut r = rng(11);
        for _ in 0..6 {
            let d = random_shear_data(&mut r, 5);
            assert!(validate(&d).passed());
        }
    }

    #[test]
    fn complex_structures_square_to_minus_one() {
        let mut r = rng(3);
        let j = random_complex_structure(&mut r, 6);
        assert_eq!(j.mul(&j), Matrix::identity(6).neg());
    }
}
