use crate::exterior::KForm;
use crate::lie::{bracket_span, LieAlgebra, Subspace};
use crate::linalg::{dot, unit_vector, vec_scale, Matrix, Vector};
use crate::scalar::Scalar;

use super::structure::{is_calibrated, su3_split, G2Structure};
use super::{hyp, map_from_images, norm2, GeomError};

/// Which branch of the classification applies, decided by `z(u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H3R3Case {
    CenterJInvariant,
    CenterNotJInvariant,
}

/// Structural criterion for `dφ = 0` on `(h3 ⊕ R³) ⋊ R X` next to the direct check.
#[derive(Clone, Debug, PartialEq)]
pub struct H3R3Report {
    pub calibrated: bool,
    pub case: H3R3Case,
    /// `J[u,u] ⊆ z(u)`.
    pub j_derived_in_center: bool,
    pub lambda: Option<Scalar>,
    pub mu: Option<Scalar>,
    pub conditions_hold: bool,
    pub failures: Vec<&'static str>,
}

impl H3R3Report {
    pub fn agrees(&self) -> bool {
        self.calibrated == self.conditions_hold
    }
}

fn sharp(f: &KForm) -> Vector {
    (0..f.dim()).map(|i| f.coeff(&[i])).collect()
}

/// `2×2` block of `c` at rows `r..r+2`, columns `s..s+2`.
fn block(c: &Matrix, r: usize, s: usize) -> [[Scalar; 2]; 2] {
    [[c.get(r, s).clone(), c.get(r, s + 1).clone()], [c.get(r + 1, s).clone(), c.get(r + 1, s + 1).clone()]]
}

fn is_zero_block(b: &[[Scalar; 2]; 2]) -> bool {
    b.iter().flatten().all(Scalar::is_zero)
}

/// In a basis `(v, Jv)` the complex structure is `[[0,-1],[1,0]]`; commuting blocks are `[[p,-q],[q,p]]`.
fn commutes_with_j(b: &[[Scalar; 2]; 2]) -> bool {
    b[0][0] == b[1][1] && b[0][1] == -&b[1][0]
}

/// Checks the h3⊕R³ criterion for a calibrated `φ` in an adapted basis with `X = e_7`.
pub fn check_cal_h3r3(g: &LieAlgebra, phi: &KForm) -> Result<H3R3Report, GeomError> {
    let n = 7;
    if g.dim() != n {
        return Err(GeomError::Shape("expected a seven-dimensional algebra".into()));
    }
    let x = n - 1;
    let u_idx: Vec<usize> = (0..x).collect();
    let u = Subspace::coordinate(n, &u_idx);
    let s = G2Structure::new(phi, None, 1e-9)?;
    let split = su3_split(&s, &u, &unit_vector(n, x))?;
    let (j, rho) = (split.j(), split.rho());
    let h = Matrix::from_columns(n, &(0..n).map(|k| if k == x { vec![Scalar::zero(); n] } else { g.bracket_basis(x, k) }).collect::<Vec<_>>());
    hyp(h.row(x).iter().all(Scalar::is_zero), "u is an ideal")?;
    let sub_u = Subspace::span(n, &u_idx.iter().map(|&i| unit_vector(n, i)).collect::<Vec<_>>())?;
    let d = bracket_span(g, &sub_u, &sub_u)?;
    hyp(d.is_subspace_of(&u) && d.dim() == 1, "[u,u] is one-dimensional")?;
    let rows: Vec<Vector> = u_idx
        .iter()
        .flat_map(|&k| (0..n).map(move |i| (k, i)))
        .map(|(k, i)| (0..n).map(|m| if m == x { Scalar::zero() } else { g.structure_constant(m, k, i) }).collect())
        .chain(std::iter::once(unit_vector(n, x)))
        .collect();
    let z = Subspace::span(n, &Matrix::from_rows(&rows).nullspace()?)?;
    hyp(z.dim() == 4 && d.is_subspace_of(&z), "u is isomorphic to h3 ⊕ R³")?;
    let perp_u = |sp: &Subspace| -> Result<Subspace, GeomError> { Ok(sp.orthogonal_complement()?.intersection(&u)?) };

    let d0 = d.basis()[0].clone();
    let jd = j.mul_vec(&d0);
    let j_derived_in_center = z.contains(&jd);
    let u1 = Subspace::span(n, &[d0.clone(), jd.clone()])?;
    let u2 = perp_u(&u1)?.intersection(&z)?;
    let mut failures = Vec::new();
    if !j_derived_in_center {
        failures.push("J[u,u] ⊆ z(u)");
    }
    let case = if z.is_invariant(j) { H3R3Case::CenterJInvariant } else { H3R3Case::CenterNotJInvariant };
    let (mut lambda, mut mu) = (None, None);
    if j_derived_in_center && u2.dim() == 2 {
        match case {
            H3R3Case::CenterJInvariant => {
                let u3 = perp_u(&z)?;
                let z1 = u2.basis()[0].clone();
                let w1 = u3.basis()[0].clone();
                let basis = vec![d0.clone(), jd.clone(), z1.clone(), j.mul_vec(&z1), w1.clone(), j.mul_vec(&w1), unit_vector(n, x)];
                // the correction term U3 → U2
                let hat = |w: &Vector| -> Result<Vector, GeomError> {
                    let br = g.bracket(w, &j.mul_vec(w));
                    let r = sharp(&rho.interior(&br).interior(w));
                    let c = norm2(&br).checked_div(&(&Scalar::int(2) * &norm2(&r)))?;
                    Ok(vec_scale(&r, &-&c))
                };
                let zero = vec![Scalar::zero(); n];
                let images = vec![zero.clone(), zero.clone(), zero.clone(), zero.clone(), hat(&basis[4])?, hat(&basis[5])?, zero];
                let hat_m = map_from_images(n, &basis, &images)?;
                let b = Matrix::from_columns(n, &basis);
                let c = b.inverse()?.mul(&h.sub(&hat_m)).mul(&b);
                let h11 = block(&c, 0, 0);
                let lam = h11[0][0].scale(&crate::linalg::q(-1, 2));
                let m = block(&c, 2, 2)[1][0].clone();
                let three = Scalar::int(3);
                let checks: [(bool, &'static str); 8] = [
                    (h11[0][1].is_zero() && h11[1][0].is_zero() && h11[0][0] == h11[1][1], "h = -2λ on U1"),
                    (is_zero_block(&block(&c, 2, 0)) && is_zero_block(&block(&c, 4, 0)), "h(U1) ⊆ U1"),
                    (is_zero_block(&block(&c, 4, 2)), "h(U2) ⊆ U1 ⊕ U2"),
                    ({
                        let b22 = block(&c, 2, 2);
                        b22[0][0] == &three * &lam && b22[1][1] == b22[0][0] && b22[0][1] == -&m
                    }, "h = 3λ + μJ on U2"),
                    ({
                        let b33 = block(&c, 4, 4);
                        b33[0][0] == -&lam && b33[1][1] == b33[0][0] && b33[1][0] == -&m && b33[0][1] == m
                    }, "h = -λ - μJ on U3"),
                    (commutes_with_j(&block(&c, 0, 2)), "[h12, J] = 0"),
                    (commutes_with_j(&block(&c, 0, 4)), "[h13, J] = 0"),
                    (commutes_with_j(&block(&c, 2, 4)), "[h23, J] = 0"),
                ];
                failures.extend(checks.iter().filter(|(ok, _)| !ok).map(|(_, w)| *w));
                lambda = Some(lam);
                mu = Some(m);
            }
            H3R3Case::CenterNotJInvariant => {
                let zb = z.basis();
                let rho_d = rho.interior(&d0);
                let vanish = (0..zb.len()).all(|a| (a + 1..zb.len()).all(|b| rho_d.evaluate(&[zb[a].clone(), zb[b].clone()]).is_zero()));
                if !vanish {
                    failures.push("ρ vanishes on [u,u] ∧ Λ²z(u)");
                }
                let (z1, z2) = (u2.basis()[0].clone(), u2.basis()[1].clone());
                let v = j.mul_vec(&g.bracket(&j.mul_vec(&z1), &j.mul_vec(&z2)));
                let r = sharp(&rho.interior(&z1).interior(&z2));
                let lam = (-&dot(&v, &r)).checked_div(&(&Scalar::int(8) * &norm2(&r)))?;
                if vec_scale(&r, &(&Scalar::int(-8) * &lam)) != v {
                    failures.push("-8λ ρ(Z1,Z2,·) = J[JZ1,JZ2] is solvable");
                }
                let basis = vec![d0.clone(), jd.clone(), z1.clone(), z2.clone(), j.mul_vec(&z1), j.mul_vec(&z2), unit_vector(n, x)];
                let coef = [-2, -6, 3, 3, -1, -1, 0];
                let images: Vec<Vector> = basis.iter().zip(coef).map(|(b, c)| vec_scale(b, &(&Scalar::int(c) * &lam))).collect();
                let h1 = h.sub(&map_from_images(n, &basis, &images)?);
                if !rho.endo_action(&h1).is_zero() {
                    failures.push("h1 ∈ sl(u,ρ)");
                }
                if !(h1.mul_vec(&d0).iter().all(Scalar::is_zero) && h1.mul_vec(&jd).iter().all(Scalar::is_zero)) {
                    failures.push("U1 ⊆ ker h1");
                }
                if !zb.iter().all(|v| z.contains(&h1.mul_vec(v))) {
                    failures.push("h1(z(u)) ⊆ z(u)");
                }
                lambda = Some(lam);
            }
        }
    } else if u2.dim() != 2 {
        failures.push("U2 is two-dimensional");
    }
    Ok(H3R3Report {
        calibrated: is_calibrated(g, phi),
        case,
        j_derived_in_center,
        lambda,
        mu,
        conditions_hold: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::phi_cal;
    use super::*;
    use crate::notation::parse_algebra;

    #[test]
    fn case_one_example() {
        let g = parse_algebra("(-4.17+56,-4.27,6.37+1/2.57,6.47-1/2.67,-2.57,-2.67,0)").unwrap();
        let r = check_cal_h3r3(&g, &phi_cal()).unwrap();
        assert_eq!(r.case, H3R3Case::CenterJInvariant);
        assert!(r.calibrated && r.conditions_hold, "{:?}", r.failures);
        assert_eq!(r.lambda, Some(Scalar::int(2)));
        let bad = parse_algebra("(-4.17+56,-4.27,6.37+57,6.47-1/2.67,-2.57,-2.67,0)").unwrap();
        let r = check_cal_h3r3(&bad, &phi_cal()).unwrap();
        assert!(!r.calibrated && !r.conditions_hold && r.agrees());
    }

    #[test]
    fn case_two_example() {
        // a = 2, b = 3
        let g = parse_algebra("(-2.17-8.36,-6.27,3.37,7.47,-1.57,-5.67,0)").unwrap();
        let r = check_cal_h3r3(&g, &phi_cal()).unwrap();
        assert_eq!(r.case, H3R3Case::CenterNotJInvariant);
        assert!(r.calibrated && r.conditions_hold, "{:?}", r.failures);
        assert_eq!(r.lambda, Some(Scalar::int(1)));
    }
}
