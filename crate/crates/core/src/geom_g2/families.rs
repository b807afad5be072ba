use crate::exterior::{j_pullback, KForm, VForm};
use crate::lie::Subspace;
use crate::linalg::{dot, unit_vector, vec_add, vec_scale, vec_sub, LinalgError, Matrix, Vector};
use crate::scalar::Scalar;

use super::almost_abelian::AlmostAbelian;
use super::structure::SU3Split;
use super::{coords_in_basis, form_vector, hyp, image_of, image_vectors, kernel_of, map_from_images, norm2, proportional, solve_maps, GeomError};

/// Cases of the cocalibrated classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CocalCase {
    /// `ω₀` primitive (1,1), one-dimensional image.
    A1,
    /// `ω₀` primitive (1,1), two-dimensional image.
    A2,
    /// `dim a = 4`, `J im ω₀ ⊥ a`.
    B,
    /// `dim a = 4`, `J im ω₀ ⊂ a`.
    C,
}

/// Cases of the calibrated classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CalCase {
    /// `dim a = 2`, `f|_a` with non-zero trace.
    A1,
    /// `dim a = 2`, `f|_a = 0`.
    A2,
    /// `dim a = 4`, `a` J-invariant.
    B,
    /// `dim a = 4`, `a` not J-invariant.
    C,
}

/// `ν ∈ nu + span(freedom)`, with the scalars fixed along the way.
#[derive(Clone, Debug, PartialEq)]
pub struct NuFamily {
    pub nu: Matrix,
    pub freedom: Vec<Matrix>,
    pub scalars: Vec<(&'static str, Scalar)>,
    pub hypotheses: Vec<&'static str>,
}

fn flatten(m: &Matrix) -> Vector {
    (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).clone()).collect()
}

impl NuFamily {
    pub fn scalar(&self, name: &str) -> Option<&Scalar> {
        self.scalars.iter().find(|(n, _)| *n == name).map(|(_, s)| s)
    }

    pub fn member(&self, t: &[Scalar]) -> Matrix {
        t.iter().zip(&self.freedom).fold(self.nu.clone(), |acc, (c, f)| acc.add(&f.scale(c)))
    }

    /// Whether `nu - self.nu` lies in the span of the freedom.
    pub fn contains(&self, nu: &Matrix) -> Result<bool, GeomError> {
        let diff = flatten(&nu.sub(&self.nu));
        if self.freedom.is_empty() {
            return Ok(diff.iter().all(Scalar::is_zero));
        }
        let cols: Vec<Vector> = self.freedom.iter().map(flatten).collect();
        match Matrix::from_columns(diff.len(), &cols).solve(&diff) {
            Ok(_) => Ok(true),
            Err(LinalgError::Inconsistent) => Ok(false),
            Err(e) => Err(e.into()),
        }
    }
}

struct Prep<'a> {
    split: &'a SU3Split,
    f: Matrix,
    n: usize,
    u: Vec<usize>,
    w: Vec<KForm>,
    /// `None` when the image has a parameter-dependent direction.
    im: Option<Subspace>,
    ker: Subspace,
    tr: Scalar,
    hyps: Vec<&'static str>,
}

impl Prep<'_> {
    fn j(&self, v: &[Scalar]) -> Vector {
        self.split.j().mul_vec(v)
    }

    fn f(&self, v: &[Scalar]) -> Vector {
        self.f.mul_vec(v)
    }

    fn check(&mut self, cond: bool, what: &'static str) -> Result<(), GeomError> {
        hyp(cond, what)?;
        self.hyps.push(what);
        Ok(())
    }

    fn u_sub(&self) -> Subspace {
        Subspace::coordinate(self.n, &self.u)
    }

    /// Orthogonal complement of `s` inside `u`.
    fn perp_in_u(&self, s: &Subspace) -> Result<Subspace, GeomError> {
        Ok(s.orthogonal_complement()?.intersection(&self.u_sub())?)
    }

    fn image(&self) -> Result<Subspace, GeomError> {
        self.im.clone().ok_or_else(|| GeomError::Parametric("image of omega0 depends on the parameters".into()))
    }

    fn single_image(&mut self) -> Result<(Vector, KForm), GeomError> {
        let im = self.image()?;
        self.check(im.dim() == 1, "omega0 has one-dimensional image")?;
        let y = im.basis()[0].clone();
        let wt = coords_in_basis(&self.w, std::slice::from_ref(&y))?.remove(0);
        Ok((y, wt))
    }

    fn family(&self, nu: Matrix, freedom: Vec<Matrix>, scalars: Vec<(&'static str, Scalar)>) -> NuFamily {
        NuFamily { nu, freedom, scalars, hypotheses: self.hyps.clone() }
    }

    /// Kernel of `ν̂ ↦ (constraint(ν̂), ν̂ v for v in vanish)` on maps `u → target`.
    fn freedom(&self, target: &Subspace, constraint: &dyn Fn(&Matrix) -> Vec<Scalar>, vanish: &[Vector]) -> Result<Vec<Matrix>, GeomError> {
        let lin = |m: &Matrix| {
            let mut v = constraint(m);
            for y in vanish {
                v.extend(m.mul_vec(y));
            }
            v
        };
        let len = lin(&Matrix::zeros(self.n, self.n)).len();
        Ok(solve_maps(self.n, &self.u, target, &lin, &vec![Scalar::zero(); len])?.1)
    }

    /// Matrix on `u ⊕ R X` from images of a basis of `u`; `X ↦ 0`.
    fn from_images(&self, basis: Vec<Vector>, images: Vec<Vector>) -> Result<Matrix, GeomError> {
        let x = self.split.x();
        let mut b = basis;
        let mut im = images;
        b.push(unit_vector(self.n, x));
        im.push(vec![Scalar::zero(); self.n]);
        map_from_images(self.n, &b, &im)
    }
}

fn prep<'a>(aa: &AlmostAbelian, split: &'a SU3Split, a: &Subspace, omega0: &VForm) -> Result<Prep<'a>, GeomError> {
    if aa.dim() != 7 || aa.x() != split.x() {
        return Err(GeomError::NotAdapted("the almost Abelian splitting must use the same X as the SU(3) split".into()));
    }
    let n = 7;
    let w = omega0.ambient_components()?;
    if w.len() != n || w.iter().any(|c| c.dim() != n || c.degree() != 2) {
        return Err(GeomError::Shape("omega0 must be a 2-form with values in the algebra".into()));
    }
    let mut p = Prep {
        split,
        f: aa.f().clone(),
        n,
        u: aa.u_indices(),
        im: match image_of(&w) {
            Ok(s) => Some(s),
            Err(GeomError::Parametric(_)) => None,
            Err(e) => return Err(e),
        },
        ker: kernel_of(&w, &aa.u())?,
        w,
        tr: Scalar::zero(),
        hyps: Vec::new(),
    };
    p.check(a.is_subspace_of(&aa.u()), "a is contained in u")?;
    p.check(a.is_invariant(aa.f()), "a is f-invariant")?;
    p.check(p.w.iter().any(|c| !c.is_zero()), "omega0 is non-zero")?;
    let im_in_a = image_vectors(&p.w).iter().all(|v| a.contains(v));
    p.check(im_in_a && a.is_subspace_of(&p.ker), "im omega0 ⊆ a ⊆ ker omega0")?;
    p.tr = aa.trace_on(a)?;
    Ok(p)
}

fn sp_sigma(split: &SU3Split) -> impl Fn(&Matrix) -> Vec<Scalar> + '_ {
    move |m: &Matrix| form_vector(&split.sigma().endo_action(m))
}

fn sl_rho(split: &SU3Split) -> impl Fn(&Matrix) -> Vec<Scalar> + '_ {
    move |m: &Matrix| form_vector(&split.rho().endo_action(m))
}

/// `(k-1)`-form `ψ(v_1, ..., v_m, ·)` as a vector of coefficients (metric is the identity).
fn sharp_of(form: &KForm) -> Vector {
    (0..form.dim()).map(|i| form.coeff(&[i])).collect()
}

fn contract(form: &KForm, vs: &[&Vector]) -> KForm {
    vs.iter().fold(form.clone(), |acc, v| acc.interior(v))
}

/// The affine family of `ν` for which `(inc, id, ω₀ + α∧ν)` keeps `d*φ = 0`.
pub fn cocal_nu_family(case: CocalCase, aa: &AlmostAbelian, split: &SU3Split, a: &Subspace, omega0: &VForm) -> Result<NuFamily, GeomError> {
    let mut p = prep(aa, split, a, omega0)?;
    let sp = sp_sigma(split);
    let sigma = split.sigma();
    match case {
        CocalCase::A1 | CocalCase::A2 => {
            p.check(a.dim() <= 2, "dim a ≤ 2")?;
            let s2 = sigma.power(2);
            let prim11 = p.w.iter().all(|c| j_pullback(c, split.j()) == *c && c.wedge(&s2).is_zero());
            p.check(prim11, "omega0 takes values in primitive (1,1)-forms")?;
            let (targets, scalars) = if case == CocalCase::A1 {
                let (y, _) = p.single_image()?;
                p.check(p.w.iter().all(|c| c.endo_action(&p.f).is_zero()), "f.omega0 = 0")?;
                let fy = p.f(&y);
                (vec![(y, vec_scale(&fy, &Scalar::int(-1)))], Vec::new())
            } else {
                p.check(p.image()?.dim() == 2 && a.dim() == 2, "omega0 has two-dimensional image")?;
                let ys = a.basis().to_vec();
                let c = coords_in_basis(&p.w, &ys)?;
                let orth = c[0].wedge(&c[0]) == c[1].wedge(&c[1]) && c[0].wedge(&c[1]).is_zero();
                p.check(orth, "components of omega0 satisfy w_i∧w_j = δ_ij w_1²")?;
                let f1 = c[0].endo_action(&p.f);
                let (m, d) = c[1]
                    .masks()
                    .find(|(_, d)| d.is_constant())
                    .map(|(m, d)| (m, d.clone()))
                    .ok_or_else(|| GeomError::Parametric("second component of omega0".into()))?;
                let s = f1.coeff_mask(m).checked_div(&d)?;
                let rot = f1 == c[1].scale(&s) && c[1].endo_action(&p.f) == c[0].scale(&-&s);
                p.check(rot, "f rotates the components of omega0")?;
                let (y1, y2) = (&ys[0], &ys[1]);
                let t1 = vec_sub(&vec_scale(y2, &s), &p.f(y1));
                let t2 = vec_sub(&vec_scale(y1, &-&s), &p.f(y2));
                (vec![(y1.clone(), t1), (y2.clone(), t2)], vec![("a", s)])
            };
            let lin = |m: &Matrix| {
                let mut v = sp(m);
                for (y, _) in &targets {
                    v.extend(m.mul_vec(y));
                }
                v
            };
            let mut rhs = vec![Scalar::zero(); sp(&Matrix::zeros(7, 7)).len()];
            for (_, t) in &targets {
                rhs.extend(t.iter().cloned());
            }
            let (nu, freedom) = solve_maps(p.n, &p.u, a, &lin, &rhs).map_err(|e| match e {
                GeomError::Linalg(LinalgError::Inconsistent) => GeomError::Hypothesis("no ν in sp(u,σ) with the prescribed values".into()),
                other => other,
            })?;
            p.hyps.push("ν ∈ sp(u,σ)");
            Ok(p.family(nu, freedom, scalars))
        }
        CocalCase::B => {
            p.check(a.dim() == 4, "dim a = 4")?;
            let (y, wt) = p.single_image()?;
            let jy = p.j(&y);
            p.check(a.basis().iter().all(|v| dot(v, &jy).is_zero()), "J im omega0 ⊥ a")?;
            let fy = p.f(&y);
            p.check(fy == vec_scale(&y, &-&p.tr), "f = -tr(f|a) on im omega0")?;
            let k = sharp_of(&wt.interior(&jy));
            let jw = p.j(&jy);
            let nvec = vec_scale(&sharp_of(&contract(split.rho_hat(), &[&jw, &k])), &Scalar::int(-1));
            let r = norm2(&jy);
            let nu = Matrix::from_fn(p.n, p.n, |i, j| (&nvec[i] * &jy[j]).checked_div(&r).expect("constant norm"));
            if !r.is_constant() {
                return Err(GeomError::Parametric("norm of J im omega0".into()));
            }
            let freedom = p.freedom(a, &sp, std::slice::from_ref(&y))?;
            Ok(p.family(nu, freedom, Vec::new()))
        }
        CocalCase::C => {
            p.check(a.dim() == 4, "dim a = 4")?;
            let (y, _) = p.single_image()?;
            let jy = p.j(&y);
            p.check(a.contains(&jy), "J im omega0 ⊆ a")?;
            let ab: Vec<&Vector> = a.basis().iter().collect();
            let s2 = sigma.power(2);
            p.check(s2.evaluate(&ab.iter().map(|v| (*v).clone()).collect::<Vec<_>>()).is_zero(), "a is σ-degenerate")?;
            let r = norm2(&y);
            let yj = Subspace::span(p.n, &[y.clone(), jy.clone()])?;
            let u_perp = p.perp_in_u(&yj)?;
            let uu = u_perp.intersection(a)?;
            let a_perp = p.perp_in_u(a)?;
            if uu.dim() != 2 || a_perp.dim() != 2 {
                return Err(GeomError::Hypothesis("unexpected dimensions of the orthogonal pieces".into()));
            }
            // κ(ω₀∧ρ̂) = Σ_i e_i ⌟ (ω^i∧ρ̂)
            let kap = p.w.iter().enumerate().fold(KForm::zero(p.n, 4), |acc, (i, c)| &acc + &c.wedge(split.rho_hat()).interior_basis(i));
            let vb: Vec<Vector> = u_perp.basis().to_vec();
            let num = kap.evaluate(&vb);
            let den = s2.evaluate(&vb);
            let mu = (-num).checked_div(&den)?;
            let fy = p.f(&y);
            let sfj = sigma.evaluate(&[fy.clone(), jy.clone()]).checked_div(&r)?;
            let mut basis = vec![y.clone(), jy.clone()];
            let mut images = vec![
                vec_sub(&vec_scale(&y, &-&p.tr), &fy),
                vec_scale(&jy, &(&(&-&sfj + &p.tr) - &mu)),
            ];
            for v in uu.basis() {
                basis.push(v.clone());
                images.push(vec_scale(v, &mu));
            }
            for v in a_perp.basis() {
                let c = sigma.evaluate(&[fy.clone(), v.clone()]).checked_div(&r)?;
                basis.push(v.clone());
                images.push(vec_scale(&jy, &-&c));
            }
            let nu = p.from_images(basis, images)?;
            let freedom = p.freedom(a, &sp, std::slice::from_ref(&y))?;
            Ok(p.family(nu, freedom, vec![("mu", mu)]))
        }
    }
}

/// The affine family of `ν` for which `(inc, id, ω₀ + α∧ν)` keeps `dφ = 0`.
pub fn cal_nu_family(case: CalCase, aa: &AlmostAbelian, split: &SU3Split, a: &Subspace, omega0: &VForm) -> Result<NuFamily, GeomError> {
    let mut p = prep(aa, split, a, omega0)?;
    let sl = sl_rho(split);
    let rho = split.rho();
    match case {
        CalCase::A1 | CalCase::A2 => {
            p.check(a.dim() == 2 && p.ker.same_as(a), "a = ker omega0 is two-dimensional")?;
            p.check(a.is_invariant(split.j()), "a is J-invariant")?;
            let y = a.basis()[0].clone();
            let jy = p.j(&y);
            let ry = rho.interior(&y);
            let rjy = rho.interior(&jy);
            let freedom = p.freedom(a, &sl, a.basis())?;
            if case == CalCase::A1 {
                let wv: Vec<KForm> = (0..p.n).map(|i| &rjy.scale(&y[i]) - &ry.scale(&jy[i])).collect();
                let (i0, m0) = wv
                    .iter()
                    .enumerate()
                    .find_map(|(i, c)| c.masks().next().map(|(m, _)| (i, m)))
                    .expect("non-zero");
                let r = p.w[i0].coeff_mask(m0).checked_div(&wv[i0].coeff_mask(m0))?;
                let same = p.w.iter().zip(&wv).all(|(w, v)| *w == v.scale(&r));
                let lam = proportional(&r, &p.tr);
                let ok = same && lam.as_ref().and_then(Scalar::constant).is_some_and(|l| l > num_traits::Zero::zero());
                p.check(ok, "omega0 = tr(f|a)(JY⌟ρ⊗Y - Y⌟ρ⊗JY)")?;
                let proj = Matrix::from_columns(
                    p.n,
                    &(0..p.n)
                        .map(|j| if p.u.contains(&j) { a.orthogonal_projection(&unit_vector(p.n, j)) } else { Ok(vec![Scalar::zero(); p.n]) })
                        .collect::<Result<Vec<_>, _>>()?,
                );
                let nu = proj.scale(&-&p.tr);
                Ok(p.family(nu, freedom, vec![("trace", p.tr.clone())]))
            } else {
                p.check(aa.restrict(&p.f, a)?.is_zero(), "f|a = 0")?;
                let c = coords_in_basis(&p.w, &[y.clone(), jy.clone()])?;
                let m = Matrix::from_columns(form_vector(&ry).len(), &[form_vector(&ry), form_vector(&rjy)]);
                let (s0, _) = m.solve(&form_vector(&c[0])).map_err(|_| GeomError::Hypothesis("omega0 has the required shape".into()))?;
                let (s1, _) = m.solve(&form_vector(&c[1])).map_err(|_| GeomError::Hypothesis("omega0 has the required shape".into()))?;
                let (pa, pb, pc) = (s0[0].clone(), s0[1].clone(), s1[0].clone());
                p.check(s1[1] == -&pa, "omega0 has the required shape")?;
                p.check((&(&pa * &pa) + &(&pb * &pc)).is_zero(), "a² + bc = 0")?;
                let mut basis = vec![y.clone(), jy.clone()];
                let mut images = vec![
                    vec_sub(&vec_scale(&y, &pc), &vec_scale(&jy, &pa)),
                    vec_add(&vec_scale(&y, &-&pa), &vec_scale(&jy, &-&pb)),
                ];
                for v in p.perp_in_u(a)?.basis() {
                    basis.push(v.clone());
                    images.push(vec![Scalar::zero(); p.n]);
                }
                let nu = p.from_images(basis, images)?;
                Ok(p.family(nu, freedom, vec![("a", pa), ("b", pb), ("c", pc)]))
            }
        }
        CalCase::B | CalCase::C => {
            p.check(a.dim() == 4 && p.ker.same_as(a), "a = ker omega0 is four-dimensional")?;
            let (y, wt) = p.single_image()?;
            p.check(wt.wedge(&wt).is_zero(), "omega0 = w⊗Y with w decomposable")?;
            let jy = p.j(&y);
            let r = norm2(&y);
            let fy = p.f(&y);
            let yj = Subspace::span(p.n, &[y.clone(), jy.clone()])?;
            let uu = p.perp_in_u(&yj)?.intersection(a)?;
            if case == CalCase::B {
                p.check(a.is_invariant(split.j()), "a is J-invariant")?;
                let lam = &p.tr + &dot(&fy, &y).checked_div(&r)?;
                let mu = dot(&fy, &jy).checked_div(&r)?;
                let proj_fy = uu.orthogonal_projection(&fy)?;
                let mut basis = vec![y.clone(), jy.clone()];
                let mut images = vec![
                    vec_sub(&vec_scale(&y, &-&p.tr), &fy),
                    vec_sub(&vec_sub(&vec_scale(&y, &mu), &vec_scale(&jy, &lam)), &p.j(&proj_fy)),
                ];
                for v in uu.basis() {
                    basis.push(v.clone());
                    images.push(vec_add(&vec_scale(v, &lam), &vec_scale(&p.j(v), &mu)));
                }
                let ap = p.perp_in_u(a)?;
                let w1 = ap.basis()[0].clone();
                for w in [w1.clone(), p.j(&w1)] {
                    let jw = p.j(&w);
                    let rw = sharp_of(&contract(rho, &[&y, &w]));
                    let coef = (&wt.evaluate(&[w.clone(), jw]) * &r).checked_div(&(&Scalar::int(2) * &norm2(&rw)))?;
                    basis.push(w);
                    images.push(vec_scale(&rw, &-&coef));
                }
                let nu = p.from_images(basis, images)?;
                let freedom = p.freedom(a, &sl, std::slice::from_ref(&y))?;
                Ok(p.family(nu, freedom, vec![("lambda", lam), ("mu", mu)]))
            } else {
                p.check(!a.is_invariant(split.j()), "a is not J-invariant")?;
                p.check(a.contains(&jy), "Y ∈ a ∩ Ja")?;
                let ry = rho.interior(&y);
                let ab = a.basis();
                let vanish = (0..ab.len()).all(|i| (i + 1..ab.len()).all(|j| ry.evaluate(&[ab[i].clone(), ab[j].clone()]).is_zero()));
                p.check(vanish, "Y⌟ρ vanishes on Λ²a")?;
                let lam = dot(&fy, &y).checked_div(&r)?;
                p.check(fy == vec_scale(&y, &lam), "f(Y) = λY")?;
                let ub = uu.basis().to_vec();
                let lhs = &Scalar::int(4) * &(&lam * &rho.interior(&jy).evaluate(&ub));
                let rhs = -&(&r * &wt.evaluate(&[p.j(&ub[0]), p.j(&ub[1])]));
                p.check(lhs == rhs, "4λ JY⌟ρ = -J*w on Λ²U")?;
                let two = Scalar::int(2);
                let mut basis = vec![y.clone(), jy.clone()];
                let mut images = vec![vec_scale(&y, &(&-&two * &lam)), vec_scale(&jy, &(&Scalar::int(-4) * &lam))];
                for v in &ub {
                    basis.push(v.clone());
                    images.push(vec_scale(v, &(&two * &lam)));
                    basis.push(p.j(v));
                    images.push(vec![Scalar::zero(); p.n]);
                }
                let nu = p.from_images(basis, images)?;
                let j = split.j().clone();
                let commutes = move |m: &Matrix| flatten(&m.commutator(&j));
                let freedom = p.freedom(&yj, &commutes, &[y.clone(), jy.clone()])?;
                Ok(p.family(nu, freedom, vec![("lambda", lam)]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::structure::{su3_split, G2Structure};
    use super::super::{aa_build_data, aa_closedness_check};
    use super::*;
    use crate::notation::parse_algebra;
    use crate::scalar::{Assignment, Instantiate};

    struct Setup {
        aa: AlmostAbelian,
        split: SU3Split,
    }

    fn setup(alg: &str, cocal: bool) -> Setup {
        let g = parse_algebra(alg).unwrap();
        let aa = AlmostAbelian::new(&g, 6).unwrap();
        let s = if cocal { G2Structure::new(&phi_cocal(), Some(&star_cocal()), 1e-9) } else { G2Structure::new(&phi_cal(), None, 1e-9) }.unwrap();
        let split = su3_split(&s, &aa.u(), &unit_vector(7, 6)).unwrap();
        Setup { aa, split }
    }

    /// The given ν is in the family, and family members give closed structures.
    fn exercise(st: &Setup, fam: &NuFamily, a: &Subspace, w: &VForm, given: &Matrix, psi: &KForm) {
        assert!(fam.contains(given).unwrap(), "given ν not in family: {}\nvs {}", given, fam.nu);
        let mut t: Vec<Scalar> = (0..fam.freedom.len()).map(|i| Scalar::int(i as i64 + 2)).collect();
        for member in [fam.nu.clone(), fam.member(&t)] {
            let s = aa_build_data(&st.aa, a, w, &member).unwrap();
            let rep = aa_closedness_check(&s, psi).unwrap();
            assert!(rep.closed_on_shear && rep.agrees());
        }
        t.clear();
    }

    const COCAL: &str = "(a1.17,a2.27,a3.37,-a1.47,-a2.57,-a3.67,0)";

    #[test]
    fn cocal_a1() {
        let st = setup(COCAL, true);
        let a = Subspace::coordinate(7, &[0, 3]);
        let w = omega0(7, &[("36-25", "e1")]);
        let fam = cocal_nu_family(CocalCase::A1, &st.aa, &st.split, &a, &w).unwrap();
        let given = nu(7, &[(1, "-a1*e1"), (4, "a1*e4")]);
        assert_eq!(fam.nu, given);
        assert_eq!(fam.freedom.len(), 1);
        exercise(&st, &fam, &a, &w, &given, &star_cocal());
    }

    #[test]
    fn cocal_a2() {
        let st = setup("(a.47, -a.57, b.37, -a.17, a.27, -b.67, 0)", true);
        let a = Subspace::coordinate(7, &[2, 5]);
        let w = omega0(7, &[("-12-45", "e3"), ("-15-24", "e6")]);
        let fam = cocal_nu_family(CocalCase::A2, &st.aa, &st.split, &a, &w).unwrap();
        assert_eq!(fam.scalar("a"), Some(&Scalar::param("a").scale(&crate::linalg::q(2, 1))));
        let given = nu(7, &[(3, "-b*e3+2a*e6"), (6, "-2a*e3+b*e6")]);
        exercise(&st, &fam, &a, &w, &given, &star_cocal());
    }

    #[test]
    fn cocal_b() {
        let st = setup("(a1.17,a2.27,-2a1.37,-a1.47,-a2.57,2a1.67,0)", true);
        let a = Subspace::coordinate(7, &[0, 1, 2, 4]);
        let w = omega0(7, &[("-46", "e1")]);
        let fam = cocal_nu_family(CocalCase::B, &st.aa, &st.split, &a, &w).unwrap();
        let given = nu(7, &[(4, "-e5")]);
        assert_eq!(fam.nu, given);
        exercise(&st, &fam, &a, &w, &given, &star_cocal());
        // without the constraint on a3 the hypothesis on f fails
        let st = setup(COCAL, true);
        assert!(matches!(cocal_nu_family(CocalCase::B, &st.aa, &st.split, &a, &w), Err(GeomError::Hypothesis(_))));
    }

    #[test]
    fn cocal_c() {
        let st = setup(COCAL, true);
        let a = Subspace::coordinate(7, &[0, 3, 4, 5]);
        let w = omega0(7, &[("-c.23", "e1")]);
        let fam = cocal_nu_family(CocalCase::C, &st.aa, &st.split, &a, &w).unwrap();
        let given = nu(7, &[(1, "(a2+a3-a1)*e1"), (4, "(a1-a2-a3-c/2)*e4"), (5, "c/2*e5"), (6, "c/2*e6")]);
        assert!(fam.contains(&given).unwrap());
        let v = Assignment::new().with("c", Scalar::int(3));
        let w = w.instantiate(&v);
        let fam = cocal_nu_family(CocalCase::C, &st.aa, &st.split, &a, &w).unwrap();
        assert_eq!(fam.scalar("mu"), Some(&Scalar::ratio(3, 2)));
        let given = nu(7, &[(1, "(a2+a3-a1)*e1"), (4, "(a1-a2-a3-3/2)*e4"), (5, "3/2*e5"), (6, "3/2*e6")]);
        assert_eq!(fam.nu, given);
        exercise(&st, &fam, &a, &w, &given, &star_cocal());
    }

    const CAL: &str = "(a.17, a.27, b.37,b.47,(-a-b).57,(-a-b).67, 0)";

    #[test]
    fn cal_a1() {
        let st = setup(CAL, false);
        let a = Subspace::coordinate(7, &[0, 1]);
        let w = omega0(7, &[("2a.36+2a.45", "e1"), ("2a.35-2a.46", "e2")]);
        let fam = cal_nu_family(CalCase::A1, &st.aa, &st.split, &a, &w).unwrap();
        let given = nu(7, &[(1, "-2a*e1"), (2, "-2a*e2")]);
        assert_eq!(fam.nu, given);
        exercise(&st, &fam, &a, &w, &given, &phi_cal());
    }

    #[test]
    fn cal_a2() {
        let st = setup("(0, 0, b.37,b.47,-b.57,-b.67, 0)", false);
        let a = Subspace::coordinate(7, &[0, 1]);
        let w = omega0(7, &[("p*q.35-p*q.46+p^2.36+p^2.45", "e1"), ("q^2.35-q^2.46+p*q.36+p*q.45", "e2")]);
        let fam = cal_nu_family(CalCase::A2, &st.aa, &st.split, &a, &w).unwrap();
        let given = nu(7, &[(1, "-q^2*e1+p*q*e2"), (2, "p*q*e1-p^2*e2")]);
        assert_eq!(fam.nu, given);
        exercise(&st, &fam, &a, &w, &given, &phi_cal());
    }

    #[test]
    fn cal_b() {
        let st = setup(CAL, false);
        let a = Subspace::coordinate(7, &[0, 1, 2, 3]);
        let w = omega0(7, &[("-56", "e1")]);
        let fam = cal_nu_family(CalCase::B, &st.aa, &st.split, &a, &w).unwrap();
        let given = nu(
            7,
            &[(1, "-(3a+2b)*e1"), (2, "-(3a+2b)*e2"), (3, "(3a+2b)*e3"), (4, "(3a+2b)*e4"), (5, "1/2*e3"), (6, "-1/2*e4")],
        );
        assert_eq!(fam.nu, given);
        exercise(&st, &fam, &a, &w, &given, &phi_cal());
    }

    #[test]
    fn cal_c() {
        let st = setup(CAL, false);
        let a = Subspace::coordinate(7, &[0, 1, 3, 4]);
        let w = omega0(7, &[("4a.36", "e1")]);
        let fam = cal_nu_family(CalCase::C, &st.aa, &st.split, &a, &w).unwrap();
        assert_eq!(fam.scalar("lambda"), Some(&Scalar::param("a")));
        let v = Assignment::new().with("a", Scalar::int(5));
        let st = Setup { aa: AlmostAbelian::new(&st.aa.algebra().instantiate(&v), 6).unwrap(), split: st.split };
        let w = w.instantiate(&v);
        let fam = cal_nu_family(CalCase::C, &st.aa, &st.split, &a, &w).unwrap();
        let given = nu(7, &[(1, "-10*e1"), (2, "-20*e2"), (4, "10*e4"), (5, "10*e5")]);
        assert_eq!(fam.nu, given);
        exercise(&st, &fam, &a, &w, &given, &phi_cal());
    }
}
