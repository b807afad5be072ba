//! The worked examples, frozen as text in the compact notation.

use crate::exterior::{KForm, VForm, ValueSpace};
use crate::geom_g2::{CalCase, CocalCase};
use crate::lie::{LieAlgebra, Subspace};
use crate::linalg::{unit_vector, Matrix, Vector};
use crate::notation::{parse_algebra, parse_form, parse_scalar, parse_vector, ParseError};
use crate::scalar::{Assignment, Instantiate};

pub const PHI_CAL: &str = "127+347+567+135-146-236-245";
pub const PHI_COCAL: &str = "126-135-147+234-257-367-456";
pub const STAR_PHI_COCAL: &str = "1425+1436+2536+1237-1567+2467-3457";
pub const SIGMA_STD: &str = "12+34+56";

/// What an example demonstrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Cocal(CocalCase),
    Cal(CalCase),
    SemiKahler { integrable: bool },
    Twist,
    Abelianize,
}

#[derive(Clone, Debug)]
pub struct Example {
    pub id: &'static str,
    pub kind: Kind,
    pub base: &'static str,
    /// Applied in order to every parsed object, including `expected`.
    pub substitutions: &'static [(&'static str, &'static str)],
    /// 1-based indices spanning `a` (or the central subspace of a twist).
    pub a: &'static [usize],
    /// `ω₀ = Σ form ⊗ vector`.
    pub omega0: &'static [(&'static str, &'static str)],
    /// Columns `ν(e_j)`, 1-based.
    pub nu: &'static [(usize, &'static str)],
    pub expected: &'static str,
}

const COCAL_BASE: &str = "(a1.17,a2.27,a3.37,-a1.47,-a2.57,-a3.67,0)";
const CAL_BASE: &str = "(a.17, a.27, b.37,b.47,c.57,c.67, 0)";
const ASK_BASE: &str = "(a1.16,a2.26,a3.36,a4.46,a5.56,0)";

pub static EXAMPLES: [Example; 12] = [
    Example {
        id: "cocal.a.i",
        kind: Kind::Cocal(CocalCase::A1),
        base: COCAL_BASE,
        substitutions: &[],
        a: &[1, 4],
        omega0: &[("36-25", "e1")],
        nu: &[(1, "-a1*e1"), (4, "a1*e4")],
        expected: "(25-36, a2.27, a3.37,0, -a2.57, -a3.67, 0)",
    },
    Example {
        id: "cocal.a.ii",
        kind: Kind::Cocal(CocalCase::A2),
        base: "(a.47, -a.57, b.37, -a.17, a.27, -b.67, 0)",
        substitutions: &[],
        a: &[3, 6],
        omega0: &[("-12-45", "e3"), ("-15-24", "e6")],
        nu: &[(3, "-b*e3+2a*e6"), (6, "-2a*e3+b*e6")],
        expected: "(a.47, -a.57, -2a.67+12+45, -a.17, a.27, 2a.37+15+24, 0)",
    },
    Example {
        id: "cocal.b",
        kind: Kind::Cocal(CocalCase::B),
        base: COCAL_BASE,
        substitutions: &[("a3", "-2a1")],
        a: &[1, 2, 3, 5],
        omega0: &[("-46", "e1")],
        nu: &[(4, "-e5")],
        expected: "(a1.17+46, a2.27, -2a1.37, -a1.47, -47-a2.57, 2a1.67, 0)",
    },
    Example {
        id: "cocal.c",
        kind: Kind::Cocal(CocalCase::C),
        base: COCAL_BASE,
        substitutions: &[("b", "a2+a3")],
        a: &[1, 4, 5, 6],
        omega0: &[("-c.23", "e1")],
        nu: &[(1, "(a2+a3-a1)*e1"), (4, "(a1-a2-a3-c/2)*e4"), (5, "c/2*e5"), (6, "c/2*e6")],
        expected: "(b.17+c.23, a2.27, a3.37, -(b+c/2).47, (c/2-a2).57, (c/2-a3).67, 0)",
    },
    Example {
        id: "cal.a.i",
        kind: Kind::Cal(CalCase::A1),
        base: CAL_BASE,
        substitutions: &[("c", "-a-b")],
        a: &[1, 2],
        omega0: &[("2a.(36+45)", "e1"), ("2a.(35-46)", "e2")],
        nu: &[(1, "-2a*e1"), (2, "-2a*e2")],
        expected: "(-a.17-2a.(36+45), -a.27-2a.(35-46), b.37,b.47,c.57,c.67, 0)",
    },
    Example {
        id: "cal.a.ii",
        kind: Kind::Cal(CalCase::A2),
        base: CAL_BASE,
        substitutions: &[("c", "-a-b"), ("a", "0"), ("a1", "p*q"), ("a2", "p^2"), ("a3", "-q^2")],
        a: &[1, 2],
        omega0: &[("a1.(35-46)+a2.(36+45)", "e1"), ("-a3.(35-46)+a1.(36+45)", "e2")],
        nu: &[(1, "a3*e1+a1*e2"), (2, "a1*e1-a2*e2")],
        expected: "(a3.17-a1.(35-46-27)-a2.(36+45), -a2.27+a3.(35-46)-a1.(36+45-17), b.37, b.47, -b.57, -b.67, 0)",
    },
    Example {
        id: "cal.b",
        kind: Kind::Cal(CalCase::B),
        base: CAL_BASE,
        substitutions: &[("c", "-a-b")],
        a: &[1, 2, 3, 4],
        omega0: &[("-56", "e1")],
        nu: &[(1, "-(3a+2b)*e1"), (2, "-(3a+2b)*e2"), (3, "(3a+2b)*e3"), (4, "(3a+2b)*e4"), (5, "1/2*e3"), (6, "-1/2*e4")],
        expected: "(2c.17+56,2c.27,-3c.37+1/2.57,-3c.47-1/2.67,c.57,c.67,0)",
    },
    Example {
        id: "cal.c",
        kind: Kind::Cal(CalCase::C),
        base: CAL_BASE,
        substitutions: &[("c", "-a-b")],
        a: &[1, 2, 4, 5],
        omega0: &[("4a.36", "e1")],
        nu: &[(1, "-2a*e1"), (2, "-4a*e2"), (4, "2a*e4"), (5, "2a*e5")],
        expected: "(-a.17-4a.36,-3a.27,b.37,(b+2a).47,(a-b).57,-(a+b).67,0)",
    },
    Example {
        id: "ask.basic",
        kind: Kind::SemiKahler { integrable: false },
        base: ASK_BASE,
        substitutions: &[("a4", "-a1-a2-a3")],
        a: &[2, 4, 5],
        omega0: &[("-13", "e5")],
        nu: &[(5, "(a1+a3-a5)*e5")],
        expected: "(a1.16,a2.26,a3.36,a4.46,(a1+a3).56+13,0)",
    },
    Example {
        id: "ask.sk",
        kind: Kind::SemiKahler { integrable: true },
        base: ASK_BASE,
        substitutions: &[("a4", "-a1-a2-a3"), ("a2", "a1"), ("a3", "-a1")],
        a: &[5],
        omega0: &[("-13-24", "e5")],
        nu: &[(5, "-a5*e5")],
        expected: "(a1.16,a1.26,-a1.36,-a1.46,13+24,0)",
    },
    Example {
        id: "twist.nilpotent.h3",
        kind: Kind::Twist,
        base: "(0,0,0)",
        substitutions: &[],
        a: &[3],
        omega0: &[("-12", "e3")],
        nu: &[],
        expected: "(0,0,12)",
    },
    Example {
        id: "abelianize.demo",
        kind: Kind::Abelianize,
        base: "(25-36, a2.27, a3.37,0, -a2.57, -a3.67, 0)",
        substitutions: &[("a2", "1"), ("a3", "2")],
        a: &[],
        omega0: &[],
        nu: &[],
        expected: "(0,0,0,0,0,0,0)",
    },
];

pub fn ids() -> Vec<&'static str> {
    EXAMPLES.iter().map(|e| e.id).collect()
}

pub fn example(id: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.id == id)
}

impl Example {
    pub fn assignment(&self) -> Result<Assignment, ParseError> {
        let mut out = Assignment::new();
        for (name, expr) in self.substitutions {
            out = out.then(&Assignment::new().with(name, parse_scalar(expr)?));
        }
        Ok(out)
    }

    pub fn base_algebra(&self) -> Result<LieAlgebra, ParseError> {
        Ok(parse_algebra(self.base)?.instantiate(&self.assignment()?))
    }

    pub fn expected_algebra(&self) -> Result<LieAlgebra, ParseError> {
        Ok(parse_algebra(self.expected)?.instantiate(&self.assignment()?))
    }

    pub fn dim(&self) -> Result<usize, ParseError> {
        Ok(parse_algebra(self.base)?.dim())
    }

    pub fn subspace(&self) -> Result<Subspace, ParseError> {
        let n = self.dim()?;
        Ok(Subspace::coordinate(n, &self.a.iter().map(|i| i - 1).collect::<Vec<_>>()))
    }

    /// `ω₀` with values in the algebra itself, one component per basis vector.
    pub fn omega0(&self) -> Result<VForm, ParseError> {
        let n = self.dim()?;
        omega0_from_terms(n, &self.omega0.iter().map(|(f, v)| (f.to_string(), v.to_string())).collect::<Vec<_>>(), &self.assignment()?)
    }

    pub fn nu(&self) -> Result<Matrix, ParseError> {
        let n = self.dim()?;
        nu_from_columns(n, &self.nu.iter().map(|(j, v)| (*j, v.to_string())).collect::<Vec<_>>(), &self.assignment()?)
    }
}

/// `Σ form ⊗ vector` as an algebra-valued form.
pub fn omega0_from_terms(n: usize, terms: &[(String, String)], subs: &Assignment) -> Result<VForm, ParseError> {
    let mut comps = vec![KForm::zero(n, 2); n];
    for (f, v) in terms {
        let f = parse_form(f, n)?.instantiate(subs);
        let v = parse_vector(v, n)?;
        for i in 0..n {
            comps[i] = &comps[i] + &f.scale(&v[i].instantiate(subs));
        }
    }
    let basis: Vec<Vector> = (0..n).map(|i| unit_vector(n, i)).collect();
    Ok(VForm::new(ValueSpace::embedded("g", basis), comps).expect("one component per basis vector"))
}

/// Matrix with the given 1-based columns.
pub fn nu_from_columns(n: usize, cols: &[(usize, String)], subs: &Assignment) -> Result<Matrix, ParseError> {
    let mut m = Matrix::zeros(n, n);
    for (j, v) in cols {
        if *j == 0 || *j > n {
            return Err(ParseError::IndexOutOfRange { index: *j, dim: n });
        }
        let v = parse_vector(v, n)?;
        for i in 0..n {
            m.set(i, j - 1, v[i].instantiate(subs));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_parse() {
        for e in &EXAMPLES {
            e.base_algebra().unwrap();
            e.expected_algebra().unwrap();
            e.omega0().unwrap();
            e.nu().unwrap();
        }
        assert_eq!(ids().len(), 12);
    }
}
