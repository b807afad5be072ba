//! Exact multivariate polynomials over the rationals.
//!
//! Every exact computation in the crate runs over [`Scalar`]. Parameters are
//! named (`a1`, `b`, `c`, ...); underscores are dropped on construction so
//! `a_1` and `a1` name the same parameter.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by the non-constant polynomial {0}; instantiate parameters first")]
    NonConstantDivisor(String),
}

/// Product of parameters with positive exponents, sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(normalize_name(name), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Printing order: higher degree first, then lexicographic.
    pub fn display_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        other.degree().cmp(&self.degree()).then_with(|| {
            for ((a, x), (b, y)) in self.0.iter().zip(&other.0) {
                let o = a.cmp(b).then_with(|| y.cmp(x));
                if o.is_ne() {
                    return o;
                }
            }
            other.0.len().cmp(&self.0.len())
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn normalize_name(name: &str) -> String {
    name.chars().filter(|c| *c != '_').collect()
}

/// Canonical polynomial: no zero coefficients are ever stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n/d`; panics when `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Monomial::one(), q);
        }
        Scalar { terms }
    }

    pub fn param(name: &str) -> Self {
        Scalar::monomial(BigRational::one(), Monomial::var(name))
    }

    pub fn monomial(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Scalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// The value when the polynomial has no parameter dependence.
    pub fn constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .get(&Monomial::one())
                .cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant().is_some()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    /// Exact division, permitted only by nonzero constants.
    pub fn checked_div(&self, d: &Scalar) -> Result<Scalar, ScalarError> {
        match d.constant() {
            Some(c) if c.is_zero() => Err(ScalarError::DivisionByZero),
            Some(c) => Ok(self.scale(&c.recip())),
            None => Err(ScalarError::NonConstantDivisor(d.to_string())),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Substitutes parameters by polynomials; unassigned parameters stay symbolic.
    pub fn instantiate(&self, a: &Assignment) -> Scalar {
        if a.is_empty() {
            return self.clone();
        }
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = Scalar::from_rational(c.clone());
            for (name, e) in &m.0 {
                let f = match a.get(name) {
                    Some(v) => v.pow(*e),
                    None => Scalar::monomial(BigRational::one(), Monomial(vec![(name.clone(), *e)])),
                };
                t = &t * &f;
            }
            out += &t;
        }
        out
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.constant().and_then(|c| rational_to_f64(&c))
    }

    /// Terms in printing order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.display_cmp(b.0));
        v
    }

    /// Sign of the first term in printing order.
    pub fn leading_is_negative(&self) -> bool {
        self.sorted_terms()
            .first()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
    }

    fn add_term(&mut self, m: &Monomial, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }
}

pub fn rational_to_f64(q: &BigRational) -> Option<f64> {
    let n = q.numer().to_f64()?;
    let d = q.denom().to_f64()?;
    Some(n / d)
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Re-parsable form, e.g. `2a1*a2-1/2c+3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if c.is_negative() {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            let a = c.abs();
            if m.is_one() {
                write_rational(f, &a)?;
            } else {
                if !a.is_one() {
                    write_rational(f, &a)?;
                }
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(&m1.times(m2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m, &-c);
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut out = Scalar::zero();
        for s in iter {
            out += &s;
        }
        out
    }
}

/// Parameter substitutions; values may themselves be polynomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, Scalar>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn with(mut self, name: &str, value: impl Into<Scalar>) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: impl Into<Scalar>) {
        self.0.insert(normalize_name(name), value.into());
    }

    pub fn get(&self, name: &str) -> Option<&Scalar> {
        self.0.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Scalar)> {
        self.0.iter()
    }

    /// Applies `self` then `next`.
    pub fn then(&self, next: &Assignment) -> Assignment {
        let mut out: BTreeMap<String, Scalar> = self
            .0
            .iter()
            .map(|(k, v)| (k.clone(), v.instantiate(next)))
            .collect();
        for (k, v) in &next.0 {
            out.entry(k.clone()).or_insert_with(|| v.clone());
        }
        Assignment(out)
    }
}

/// Types that carry parameters.
pub trait Instantiate {
    fn instantiate(&self, a: &Assignment) -> Self;
}

impl Instantiate for Scalar {
    fn instantiate(&self, a: &Assignment) -> Self {
        Scalar::instantiate(self, a)
    }
}

impl<T: Instantiate> Instantiate for Vec<T> {
    fn instantiate(&self, a: &Assignment) -> Self {
        self.iter().map(|x| x.instantiate(a)).collect()
    }
}

/// Coefficient ring used by the generic form code (exact or floating point).
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_i64(n: i64) -> Self;
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> Scalar {
        Scalar::param(n)
    }

    #[test]
    fn canonical_zero() {
        let a = p("a1");
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a), Scalar::zero());
    }

    #[test]
    fn underscore_names_merge() {
        assert_eq!(p("a_1"), p("a1"));
    }

    #[test]
    fn product_and_display() {
        let s = &(&p("a1") + &Scalar::int(2)) * &(&p("a1") - &p("b"));
        assert_eq!(s.to_string(), "a1^2-a1*b+2a1-2b");
        assert_eq!(Scalar::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!((&p("c") * &Scalar::ratio(1, 2)).to_string(), "1/2c");
    }

    #[test]
    fn division_only_by_constants() {
        let a = p("a");
        assert_eq!(
            (&a * &Scalar::int(4)).checked_div(&Scalar::int(2)).unwrap(),
            &a * &Scalar::int(2)
        );
        assert!(matches!(a.checked_div(&a), Err(ScalarError::NonConstantDivisor(_))));
        assert_eq!(a.checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn substitution_by_polynomial() {
        // a4 -> -a1-a2-a3 turns a1+a2+a3+a4 into 0
        let s: Scalar = ["a1", "a2", "a3", "a4"].iter().map(|n| p(n)).sum();
        let sub = Assignment::new().with("a4", -(&(&p("a1") + &p("a2")) + &p("a3")));
        assert!(s.instantiate(&sub).is_zero());
    }

    #[test]
    fn chained_assignment() {
        let first = Assignment::new().with("c", -(&p("a") + &p("b")));
        let second = Assignment::new().with("a", Scalar::int(0));
        let both = first.then(&second);
        assert_eq!(p("c").instantiate(&both), -p("b"));
        assert_eq!(p("a").instantiate(&both), Scalar::zero());
    }
}
