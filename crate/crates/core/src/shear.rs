//! Shear data on a Lie algebra, the shear itself, transfer of invariant
//! tensors, inversion and iterated abelianization.
//!
//! Conventions: `ξ: a_G → g` is `n × k`, `a: a_G → a_P` is `k × k`, `ω` is a
//! 2-form with values in `a_P` and `η` a connection on `a_P`. The extension
//! `p = g ⊕ a_P` has brackets `[X,Y]_p = [X,Y] - ω(X,Y)` and `[X,Z]_p = η(X)Z`;
//! the shear is `h = p / ξ̊(a_G)` with `ξ̊Z = (ξZ, aZ)`, identified with `g`
//! along the horizontal complement.

use thiserror::Error;

use crate::exterior::{ExteriorError, KForm, VForm, ValueSpace};
use crate::lie::{
    ce_differential, d_nabla, derived_length, derived_series, direct_sum, jacobi_check, quotient, Connection, LieAlgebra,
    LieError, Subspace,
};
use crate::linalg::{is_zero_vector, unit_vector, vec_add, vec_sub, LinalgError, Matrix, Vector};
use crate::notation::print_vector;
use crate::scalar::{Assignment, Instantiate, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShearError {
    #[error("shear data failed validation: {}", .0.failures())]
    Invalid(Box<ValidationReport>),
    #[error("xi is not injective")]
    NotInjective,
    #[error("a is not invertible over the current coefficients")]
    NotInvertible,
    #[error("malformed shear data: {0}")]
    Shape(String),
    #[error("extension fails Jacobi on (e{}, e{}, e{})", .0.0 + 1, .0.1 + 1, .0.2 + 1)]
    ExtensionNotLie((usize, usize, usize)),
    #[error("shear fails Jacobi on (e{}, e{}, e{})", .0.0 + 1, .0.1 + 1, .0.2 + 1)]
    ShearNotLie((usize, usize, usize)),
    #[error("quotient and closed-form brackets differ on (e{}, e{})", .0.0 + 1, .0.1 + 1)]
    PathMismatch((usize, usize)),
    #[error("transferred differential disagrees with d on the shear")]
    TransferMismatch,
    #[error("J does not square to -id")]
    NotComplexStructure,
    #[error("algebra is already abelian")]
    AlreadyAbelian,
    #[error("algebra is not solvable")]
    NotSolvable,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// Left-invariant shear data `(ξ, a, ω, η)` on a Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShearData {
    base: LieAlgebra,
    xi: Matrix,
    a: Matrix,
    omega: VForm,
    eta: Connection,
}

impl ShearData {
    pub fn new(base: LieAlgebra, xi: Matrix, a: Matrix, omega: VForm, eta: Connection) -> Result<Self, ShearError> {
        let n = base.dim();
        let k = xi.cols();
        if xi.rows() != n {
            return Err(ShearError::Shape(format!("xi has {} rows, algebra has dimension {n}", xi.rows())));
        }
        if a.rows() != k || a.cols() != k {
            return Err(ShearError::Shape(format!("a must be {k}x{k}")));
        }
        if omega.value_dim() != k {
            return Err(ShearError::Shape(format!("omega has {} components, expected {k}", omega.value_dim())));
        }
        if omega.comps().iter().any(|c| c.dim() != n || c.degree() != 2) {
            return Err(ShearError::Shape("omega components must be 2-forms on the base".into()));
        }
        if eta.dim() != n || eta.values() != k {
            return Err(ShearError::Shape("eta must be a connection on a_P over the base".into()));
        }
        Ok(ShearData { base, xi, a, omega, eta })
    }

    /// Twist data: `ξ` the inclusion of a central subspace, `a = id`, `η = 0`.
    pub fn twist(base: LieAlgebra, xi: Matrix, omega: VForm) -> Result<Self, ShearError> {
        let (n, k) = (base.dim(), xi.cols());
        ShearData::new(base, xi, Matrix::identity(k), omega, Connection::zero(n, k))
    }

    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    pub fn xi(&self) -> &Matrix {
        &self.xi
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn omega(&self) -> &VForm {
        &self.omega
    }

    pub fn eta(&self) -> &Connection {
        &self.eta
    }

    pub fn rank(&self) -> usize {
        self.xi.cols()
    }

    pub fn a_inverse(&self) -> Result<Matrix, ShearError> {
        self.a.inverse().map_err(|_| ShearError::NotInvertible)
    }

    /// `γ(X)Z = a⁻¹(ω(ξZ, X) + η(X) a Z)`.
    pub fn gamma(&self) -> Result<Connection, ShearError> {
        let ainv = self.a_inverse()?;
        let n = self.base.dim();
        let k = self.rank();
        let xs = self.xi.columns();
        let mats = (0..n)
            .map(|i| {
                let e = unit_vector(n, i);
                let cols: Vec<Vector> = xs.iter().map(|z| self.omega.evaluate(&[z.clone(), e.clone()])).collect();
                let w = Matrix::from_columns(k, &cols);
                ainv.mul(&w.add(&self.eta.at(i).mul(&self.a)))
            })
            .collect();
        Ok(Connection::new(k, mats)?)
    }

    /// `ξ a⁻¹`, the map through which `ω` corrects the bracket.
    pub fn correction_map(&self) -> Result<Matrix, ShearError> {
        Ok(self.xi.mul(&self.a_inverse()?))
    }

    /// `[X,Y]_h = [X,Y] + ξa⁻¹ω(X,Y)` on the basis of `g`.
    pub fn closed_form_algebra(&self) -> Result<LieAlgebra, ShearError> {
        let f = self.correction_map()?;
        let n = self.base.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w: Vector = self.omega.comps().iter().map(|c| c.coeff(&[i, j])).collect();
                entries.push(((i, j), vec_add(&self.base.bracket_basis(i, j), &f.mul_vec(&w))));
            }
        }
        Ok(LieAlgebra::from_brackets(n, entries)?.with_labels(self.base.labels().to_vec()))
    }
}

impl Instantiate for ShearData {
    fn instantiate(&self, s: &Assignment) -> Self {
        ShearData {
            base: self.base.instantiate(s),
            xi: self.xi.instantiate(s),
            a: self.a.instantiate(s),
            omega: self.omega.instantiate(s),
            eta: self.eta.instantiate(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Check {
    fn pass(name: &'static str) -> Self {
        Check { name, passed: true, witness: None }
    }

    fn fail(name: &'static str, witness: impl Into<String>) -> Self {
        Check { name, passed: false, witness: Some(witness.into()) }
    }

    fn from_witness(name: &'static str, w: Option<String>) -> Self {
        match w {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> String {
        let f: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.witness.as_deref().unwrap_or("")))
            .collect();
        f.join(", ")
    }
}

fn fmt_vec(v: &[Scalar]) -> String {
    print_vector(v)
}

/// Checks every condition making `(ξ, a, ω, η)` shear data.
pub fn validate(data: &ShearData) -> ValidationReport {
    let g = &data.base;
    let n = g.dim();
    let k = data.rank();
    let xs = data.xi.columns();
    let mut checks = Vec::new();

    checks.push(match data.xi.rank() {
        Ok(r) if r == k => Check::pass("xi_injective"),
        Ok(r) => Check::fail("xi_injective", format!("rank {r} < {k}")),
        Err(e) => Check::fail("xi_injective", e.to_string()),
    });
    let gamma = data.gamma();
    checks.push(match &gamma {
        Ok(_) => Check::pass("a_invertible"),
        Err(e) => Check::fail("a_invertible", e.to_string()),
    });

    let pull = |i: usize, j: usize| data.omega.evaluate(&[xs[i].clone(), xs[j].clone()]);
    let star = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .find_map(|(i, j)| {
            let w = pull(i, j);
            (!is_zero_vector(&w)).then(|| format!("omega(xi z{}, xi z{}) = {}", i + 1, j + 1, fmt_vec(&w)))
        });

    match &gamma {
        Ok(gm) => {
            let mut w = None;
            'outer: for i in 0..k {
                for j in i + 1..k {
                    let lhs = g.bracket(&xs[i], &xs[j]);
                    let t = vec_sub(&gm.eval(&xs[i]).column(j), &gm.eval(&xs[j]).column(i));
                    let rhs = data.xi.mul_vec(&t);
                    if lhs != rhs {
                        w = Some(format!("z{}, z{}: {} vs {}", i + 1, j + 1, fmt_vec(&lhs), fmt_vec(&rhs)));
                        break 'outer;
                    }
                }
            }
            checks.push(Check::from_witness("cond_i", w));
        }
        Err(_) => checks.push(Check::fail("cond_i", "gamma undefined")),
    }
    checks.push(Check::from_witness("cond_ii", star.clone()));
    match &gamma {
        Ok(gm) => {
            let mut w = None;
            'outer3: for p in 0..n {
                let e = unit_vector(n, p);
                for (c, z) in xs.iter().enumerate() {
                    let lhs = g.bracket(z, &e);
                    let rhs = data.xi.mul_vec(&gm.at(p).column(c)).iter().map(|s| -s).collect::<Vector>();
                    if lhs != rhs {
                        w = Some(format!("[xi z{}, e{}] = {} but -xi(gamma z) = {}", c + 1, p + 1, fmt_vec(&lhs), fmt_vec(&rhs)));
                        break 'outer3;
                    }
                }
            }
            checks.push(Check::from_witness("cond_iii", w));
        }
        Err(_) => checks.push(Check::fail("cond_iii", "gamma undefined")),
    }
    checks.push(Check::from_witness("xi_star_omega_zero", star));
    checks.push(match d_nabla(g, &data.eta, &data.omega) {
        Ok(d) => match d.comps().iter().position(|c| !c.is_zero()) {
            None => Check::pass("dN_omega_zero"),
            Some(a) => Check::fail("dN_omega_zero", format!("component {}: {}", a + 1, d.comp(a))),
        },
        Err(e) => Check::fail("dN_omega_zero", e.to_string()),
    });
    checks.push(Check::from_witness(
        "eta_flat",
        data.eta.flatness_defect(g).map(|(i, j)| format!("on (e{}, e{})", i + 1, j + 1)),
    ));
    checks.push(match &gamma {
        Ok(gm) => Check::from_witness("gamma_flat", gm.flatness_defect(g).map(|(i, j)| format!("on (e{}, e{})", i + 1, j + 1))),
        Err(_) => Check::fail("gamma_flat", "gamma undefined"),
    });
    ValidationReport { checks }
}

/// Abelian extension `p = g ⊕ ℝᵏ` of `g` by `ω` and `η`.
pub fn build_extension(g: &LieAlgebra, omega: &VForm, eta: &Connection) -> Result<LieAlgebra, ShearError> {
    let n = g.dim();
    let k = omega.value_dim();
    if eta.values() != k || eta.dim() != n {
        return Err(ShearError::Shape("connection does not match the form".into()));
    }
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = g.bracket_basis(i, j);
            v.extend(omega.comps().iter().map(|c| -c.coeff(&[i, j])));
            entries.push(((i, j), v));
        }
        for b in 0..k {
            let mut v = vec![Scalar::zero(); n];
            v.extend(eta.at(i).column(b));
            entries.push(((i, n + b), v));
        }
    }
    let mut labels = g.labels().to_vec();
    labels.extend((1..=k).map(|b| format!("z{b}")));
    let p = LieAlgebra::from_brackets(n + k, entries)?.with_labels(labels);
    let jr = jacobi_check(&p);
    match jr.violation {
        None => Ok(p),
        Some((t, _)) => Err(ShearError::ExtensionNotLie(t)),
    }
}

/// Everything produced by [`shear`].
#[derive(Clone, Debug)]
pub struct ShearResult {
    pub data: ShearData,
    pub extension: LieAlgebra,
    /// `(n+k) × k`, columns `(ξZ, aZ)`.
    pub lifted: Matrix,
    pub shear: LieAlgebra,
    /// `n × (n+k)`: `p → h` killing `ξ̊(a_G)`.
    pub projection: Matrix,
    /// `g → h` on the horizontal basis; always the identity matrix.
    pub identification: Matrix,
    pub gamma: Connection,
}

/// Builds the shear, once as a quotient of the extension and once by the
/// closed formula, and insists both agree.
pub fn shear(data: &ShearData) -> Result<ShearResult, ShearError> {
    let report = validate(data);
    if !report.passed() {
        if report.get("xi_injective").is_some_and(|c| !c.passed) {
            return Err(ShearError::NotInjective);
        }
        if report.get("a_invertible").is_some_and(|c| !c.passed) {
            return Err(ShearError::NotInvertible);
        }
        return Err(ShearError::Invalid(Box::new(report)));
    }
    let n = data.base.dim();
    let k = data.rank();
    let p = build_extension(&data.base, &data.omega, &data.eta)?;
    let lifted = data.xi.vstack(&data.a);
    let ideal = Subspace::span(n + k, &lifted.columns())?;
    let horizontal = Subspace::coordinate(n + k, &(0..n).collect::<Vec<_>>());
    let q = quotient(&p, &ideal, Some(&horizontal))?;
    let closed = data.closed_form_algebra()?;
    if let Some((pair, _)) = q.algebra.structure_difference(&closed) {
        return Err(ShearError::PathMismatch(pair));
    }
    if let Some((t, _)) = jacobi_check(&closed).violation {
        return Err(ShearError::ShearNotLie(t));
    }
    Ok(ShearResult {
        gamma: data.gamma()?,
        data: data.clone(),
        extension: p,
        lifted,
        shear: closed,
        projection: q.projection,
        identification: Matrix::identity(n),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketCheck {
    Passed,
    Failed { quotient: Vector, closed_form: Vector },
    Skipped(String),
}

/// Nijenhuis tensors and the transfer residual.
#[derive(Clone, Debug)]
pub struct AcsTransfer {
    pub j_h: Matrix,
    pub nijenhuis_g: Vec<((usize, usize), Vector)>,
    pub nijenhuis_h: Vec<((usize, usize), Vector)>,
    /// Nonzero entries of the transferred left side minus `N_{J_h}`.
    pub residual: Vec<((usize, usize), Vector)>,
}

impl AcsTransfer {
    pub fn residual_is_zero(&self) -> bool {
        self.residual.is_empty()
    }

    pub fn integrable_on_g(&self) -> bool {
        self.nijenhuis_g.iter().all(|(_, v)| is_zero_vector(v))
    }

    pub fn integrable_on_h(&self) -> bool {
        self.nijenhuis_h.iter().all(|(_, v)| is_zero_vector(v))
    }
}

/// `N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]` on basis pairs `i < j`.
pub fn nijenhuis(g: &LieAlgebra, j: &Matrix) -> Vec<((usize, usize), Vector)> {
    let n = g.dim();
    let jc = j.columns();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (x, y) = (unit_vector(n, a), unit_vector(n, b));
            let t1 = g.bracket(&jc[a], &jc[b]);
            let t2 = j.mul_vec(&g.bracket(&jc[a], &y));
            let t3 = j.mul_vec(&g.bracket(&x, &jc[b]));
            let t4 = g.bracket_basis(a, b);
            out.push(((a, b), vec_sub(&vec_sub(&vec_sub(&t1, &t2), &t3), &t4)));
        }
    }
    out
}

impl ShearResult {
    fn omega_at(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        self.data.omega.evaluate(&[x.to_vec(), y.to_vec()])
    }

    /// Bracket of horizontal lifts in `p`, pushed to `h`.
    pub fn quotient_bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let k = self.data.rank();
        let lift = |v: &[Scalar]| {
            let mut w = v.to_vec();
            w.extend(std::iter::repeat(Scalar::zero()).take(k));
            w
        };
        self.projection.mul_vec(&self.extension.bracket(&lift(x), &lift(y)))
    }

    pub fn closed_form_bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let f = self.data.correction_map().expect("validated data has invertible a");
        vec_add(&self.data.base.bracket(x, y), &f.mul_vec(&self.omega_at(x, y)))
    }

    /// First basis pair on which the two bracket descriptions differ.
    pub fn path_mismatch(&self) -> Option<(usize, usize)> {
        let n = self.data.base.dim();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| {
            let (x, y) = (unit_vector(n, i), unit_vector(n, j));
            self.quotient_bracket(&x, &y) != self.closed_form_bracket(&x, &y)
        })
    }

    /// Horizontal identification: coefficients carry over unchanged.
    pub fn transfer_form(&self, alpha: &KForm) -> Result<KForm, ShearError> {
        if alpha.dim() != self.shear.dim() {
            return Err(ExteriorError::DimensionMismatch(alpha.dim(), self.shear.dim()).into());
        }
        Ok(alpha.clone())
    }

    /// `dα - Σ_j (ξa⁻¹ w_j ⌟ α) ∧ ω^j`, checked against `d` on the shear.
    pub fn transfer_d(&self, alpha: &KForm) -> Result<KForm, ShearError> {
        let moved = self.transfer_d_formula(alpha)?;
        if moved != ce_differential(&self.shear, &self.transfer_form(alpha)?) {
            return Err(ShearError::TransferMismatch);
        }
        Ok(moved)
    }

    /// The transfer formula alone, without the comparison.
    pub fn transfer_d_formula(&self, alpha: &KForm) -> Result<KForm, ShearError> {
        let g = &self.data.base;
        if alpha.dim() != g.dim() {
            return Err(ExteriorError::DimensionMismatch(alpha.dim(), g.dim()).into());
        }
        let f = self.data.correction_map()?;
        let mut out = ce_differential(g, alpha);
        for (j, w) in self.data.omega.comps().iter().enumerate() {
            let c = alpha.interior(&f.column(j));
            if !c.is_zero() {
                out = &out - &c.wedge(w);
            }
        }
        Ok(out)
    }

    /// Compares the Nijenhuis tensors of `J` on `g` and on `h`.
    pub fn transfer_acs(&self, j: &Matrix) -> Result<AcsTransfer, ShearError> {
        let n = self.data.base.dim();
        if j.rows() != n || j.cols() != n || j.mul(j) != Matrix::identity(n).neg() {
            return Err(ShearError::NotComplexStructure);
        }
        let f = self.data.correction_map()?;
        let big_f = |x: &[Scalar], y: &[Scalar]| f.mul_vec(&self.omega_at(x, y));
        let ng = nijenhuis(&self.data.base, j);
        let nh = nijenhuis(&self.shear, j);
        let jc = j.columns();
        let mut residual = Vec::new();
        for (((a, b), vg), (_, vh)) in ng.iter().zip(&nh) {
            let (x, y) = (unit_vector(n, *a), unit_vector(n, *b));
            let mut left = vec_sub(vg, &big_f(&x, &y));
            left = vec_sub(&left, &j.mul_vec(&big_f(&jc[*a], &y)));
            left = vec_sub(&left, &j.mul_vec(&big_f(&x, &jc[*b])));
            left = vec_add(&left, &big_f(&jc[*a], &jc[*b]));
            let r = vec_sub(&left, vh);
            if !is_zero_vector(&r) {
                residual.push(((*a, *b), r));
            }
        }
        Ok(AcsTransfer { j_h: j.clone(), nijenhuis_g: ng, nijenhuis_h: nh, residual })
    }
}

pub fn transfer_form(result: &ShearResult, alpha: &KForm) -> Result<KForm, ShearError> {
    result.transfer_form(alpha)
}

pub fn transfer_d(result: &ShearResult, alpha: &KForm) -> Result<KForm, ShearError> {
    result.transfer_d(alpha)
}

pub fn transfer_acs(result: &ShearResult, j: &Matrix) -> Result<AcsTransfer, ShearError> {
    result.transfer_acs(j)
}

/// Quotient bracket against the closed form for one pair; skipped for invalid data.
pub fn transfer_bracket_check(data: &ShearData, x: &[Scalar], y: &[Scalar]) -> BracketCheck {
    let result = match shear(data) {
        Ok(r) => r,
        Err(e) => return BracketCheck::Skipped(e.to_string()),
    };
    let q = result.quotient_bracket(x, y);
    let c = result.closed_form_bracket(x, y);
    if q == c {
        BracketCheck::Passed
    } else {
        BracketCheck::Failed { quotient: q, closed_form: c }
    }
}

/// Shear data on `h` whose shear is `g` again.
pub fn invert(result: &ShearResult) -> Result<ShearData, ShearError> {
    let d = &result.data;
    let ainv = d.a_inverse()?;
    let k = d.rank();
    let xi = d.xi.mul(&ainv).neg();
    let omega = d.omega.map_values(&ainv, ValueSpace::abstract_space("a_G", k))?;
    ShearData::new(result.shear.clone(), xi, ainv, omega, result.gamma.clone())
}

/// One step of the abelianization chain.
#[derive(Clone, Debug)]
pub struct AbelianizeStep {
    pub data: ShearData,
    pub result: ShearResult,
    /// Last nonzero term of the derived series.
    pub ideal: Subspace,
    pub complement: Subspace,
    /// `h` equals `(g/a) ⊕ a` in the basis `[complement | ideal]`.
    pub split_matches: bool,
    pub derived_length_before: usize,
    pub derived_length_after: usize,
}

/// Shears `g` along the last nonzero derived ideal so that it becomes central.
pub fn abelianize_step(g: &LieAlgebra) -> Result<AbelianizeStep, ShearError> {
    if g.is_abelian() {
        return Err(ShearError::AlreadyAbelian);
    }
    let series = derived_series(g)?;
    if !series.last().is_some_and(Subspace::is_zero) {
        return Err(ShearError::NotSolvable);
    }
    let before = series.len() - 1;
    let ideal = series[series.len() - 2].clone();
    let complement = ideal.pivot_complement();
    let n = g.dim();
    let k = ideal.dim();
    let q = n - k;
    let m = complement.basis_matrix().hstack(&ideal.basis_matrix());
    let minv = m.inverse()?;
    let pi_a = minv.select(&(q..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
    let mut comps = vec![KForm::zero(n, 2); k];
    for i in 0..n {
        for j in i + 1..n {
            let v = pi_a.mul_vec(&g.bracket_basis(i, j));
            for (c, vc) in comps.iter_mut().zip(&v) {
                if !vc.is_zero() {
                    c.add_term(&[i, j], -vc);
                }
            }
        }
    }
    let omega = VForm::new(ValueSpace::abstract_space("a", k), comps)?;
    let data = ShearData::new(g.clone(), ideal.basis_matrix(), Matrix::identity(k), omega, Connection::zero(n, k))?;
    let result = shear(&data)?;
    let split = direct_sum(&quotient(g, &ideal, Some(&complement))?.algebra, &LieAlgebra::abelian(k));
    let split_matches = result.shear.change_basis(&m)?.same_structure(&split);
    let after = derived_length(&result.shear)?.ok_or(ShearError::NotSolvable)?;
    Ok(AbelianizeStep { data, result, ideal, complement, split_matches, derived_length_before: before, derived_length_after: after })
}

/// Repeats [`abelianize_step`] until the algebra is abelian.
pub fn abelianize_chain(g: &LieAlgebra) -> Result<Vec<AbelianizeStep>, ShearError> {
    let mut steps = Vec::new();
    let mut cur = g.clone();
    while !cur.is_abelian() {
        if steps.len() > g.dim() {
            return Err(ShearError::NotSolvable);
        }
        let s = abelianize_step(&cur)?;
        cur = s.result.shear.clone();
        steps.push(s);
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_algebra, parse_form};

    fn heis() -> LieAlgebra {
        parse_algebra("(0,0,12)").unwrap()
    }

    #[test]
    fn extension_of_plane_is_heisenberg() {
        let g = LieAlgebra::abelian(2);
        let w = VForm::new(ValueSpace::abstract_space("z", 1), vec![KForm::basis(2, &[0, 1])]).unwrap();
        let p = build_extension(&g, &w, &Connection::zero(2, 1)).unwrap();
        assert!(p.same_structure(&parse_algebra("(0,0,12)").unwrap()));
        assert_eq!(p.bracket_basis(0, 1)[2], Scalar::int(-1));
    }

    #[test]
    fn trivial_data_is_identity() {
        let g = heis();
        let xi = Matrix::from_columns(3, &[unit_vector(3, 2)]);
        let w = VForm::zero(ValueSpace::abstract_space("z", 1), 3, 2);
        let d = ShearData::twist(g.clone(), xi, w).unwrap();
        let r = shear(&d).unwrap();
        assert_eq!(r.shear, g);
        assert!(r.path_mismatch().is_none());
        let back = shear(&invert(&r).unwrap()).unwrap();
        assert_eq!(back.shear, g);
    }

    #[test]
    fn twist_kills_heisenberg_bracket() {
        let g = heis();
        let xi = Matrix::from_columns(3, &[unit_vector(3, 2)]);
        let w = VForm::new(ValueSpace::abstract_space("z", 1), vec![parse_form("12", 3).unwrap()]).unwrap();
        let r = shear(&ShearData::twist(g, xi, w).unwrap()).unwrap();
        assert!(r.shear.is_abelian());
    }

    #[test]
    fn heisenberg_abelianizes_in_one_step() {
        let chain = abelianize_chain(&heis()).unwrap();
        assert_eq!(chain.len(), 1);
        assert!(chain[0].split_matches);
        assert!(chain[0].result.shear.is_abelian());
        assert!(abelianize_chain(&LieAlgebra::abelian(4)).unwrap().is_empty());
    }

    #[test]
    fn non_injective_rejected() {
        let g = LieAlgebra::abelian(2);
        let xi = Matrix::zeros(2, 1);
        let w = VForm::zero(ValueSpace::abstract_space("z", 1), 2, 2);
        assert!(matches!(shear(&ShearData::twist(g, xi, w).unwrap()), Err(ShearError::NotInjective)));
    }

    #[test]
    fn nijenhuis_of_abelian_vanishes() {
        let j = Matrix::from_ints(2, 2, &[0, -1, 1, 0]);
        assert!(nijenhuis(&LieAlgebra::abelian(2), &j).iter().all(|(_, v)| is_zero_vector(v)));
    }
}
